"""
ジョルダン代数検証ツール - HTTP API (Flask)

CLI と同じ検証スイートを JSON で返す。
    GET /api/status    稼働状況
    GET /api/config    実効設定
    GET /api/polarity  極性表
    GET /api/verify    恒等式スイート
    GET /api/random    乱数の元（jordan-v1 テキスト）
    GET /api/demo      デモの出力（テキスト）
"""

import logging
import socket
import time

from flask import Flask, Response, jsonify, request
from werkzeug.exceptions import HTTPException

from app_config import IDENTITY_NAMES, KIND_NAMES, get_config, setup_logging
from cli_verify import EXIT_FAILED, EXIT_OK, cmd_demo, default_shape, plan_suites, run_suites
from jordan_errors import JordanError
from random_gen import Distribution, GenConfig, random_elements
from serialization import render

logger = logging.getLogger(__name__)

app = Flask(__name__)
app.config['JORDAN_CONFIG'] = None
app.start_time = time.time()


class QueryError(JordanError):
    """クエリパラメータの誤り"""


def current_config():
    config = app.config.get('JORDAN_CONFIG')
    if config is None:
        config = get_config()
        app.config['JORDAN_CONFIG'] = config
    return config


def _int_arg(name, default=None, minimum=None, maximum=None):
    raw = request.args.get(name)
    if raw is None or raw == '':
        return default
    try:
        value = int(raw)
    except ValueError:
        raise QueryError(f"{name} が整数ではありません: '{raw}'")
    if minimum is not None and value < minimum:
        raise QueryError(f"{name} は {minimum} 以上が必要です: {value}")
    if maximum is not None and value > maximum:
        raise QueryError(f"{name} は {maximum} 以下が必要です: {value}")
    return value


def _choice_arg(name, choices, default=None):
    value = request.args.get(name) or default
    if value is not None and value not in choices:
        raise QueryError(f"{name} の値が不正です: '{value}'（{', '.join(choices)} のいずれか）")
    return value


def _float_arg(name):
    raw = request.args.get(name)
    if raw is None or raw == '':
        return None
    try:
        value = float(raw)
    except ValueError:
        raise QueryError(f"{name} が数値ではありません: '{raw}'")
    if not value >= 0:
        raise QueryError(f"{name} は 0 以上が必要です: {raw}")
    return value


def _shape_args(kind):
    d = _int_arg('d', minimum=1)
    n = _int_arg('n', minimum=1)
    if d is not None and kind == 'spin':
        raise QueryError("d は spin には指定できません")
    if d is not None and kind == 'albert' and d != 3:
        raise QueryError("albert の次元は 3 に固定です")
    if n is not None and kind is not None and kind != 'spin':
        raise QueryError("n は spin のときだけ指定できます")
    return d, n


@app.errorhandler(JordanError)
def handle_jordan_error(e):
    logger.warning(f"Bad request {request.path}: {e}")
    return jsonify({'success': False, 'message': str(e)}), 400


@app.errorhandler(Exception)
def handle_unexpected(e):
    if isinstance(e, HTTPException):
        return e
    logger.exception(f"Error in {request.path}: {e}")
    return jsonify({'success': False, 'message': f"サーバーエラー: {e}"}), 500


@app.route('/api/status')
def server_status():
    """サーバーステータスを返す"""
    return jsonify({
        'status': 'running',
        'timestamp': time.strftime('%Y-%m-%d %H:%M:%S'),
        'uptime': time.time() - app.start_time,
    })


@app.route('/api/config')
def config_endpoint():
    return jsonify(current_config())


@app.route('/api/polarity')
def polarity_endpoint():
    return jsonify(current_config()['polarity'])


@app.route('/api/verify')
def verify_endpoint():
    config = current_config()
    defaults = config['defaults']
    kind = _choice_arg('kind', KIND_NAMES)
    identity = _choice_arg('identity', IDENTITY_NAMES + ('all',), default='all')
    d, n = _shape_args(kind)
    trials = _int_arg('trials', defaults['trials'], minimum=1, maximum=config['server']['max_trials'])
    seed = _int_arg('seed', defaults['seed'], minimum=0, maximum=2 ** 64 - 1)
    tol = _float_arg('tol')

    plan = plan_suites(config, kind=kind, identity=identity, d=d, spin_n=n)
    outcomes = run_suites(plan, config, trials=trials, seed=seed, tol=tol,
                          distribution=Distribution(defaults['distribution']))
    status = EXIT_OK if all(o.verdict.ok for o in outcomes) else EXIT_FAILED
    logger.info(f"/api/verify: {len(outcomes)} suites, exit status {status}")
    return jsonify({'success': True, 'exit_status': status,
                    'outcomes': [o.to_record() for o in outcomes]})


@app.route('/api/random')
def random_endpoint():
    config = current_config()
    defaults = config['defaults']
    kind = _choice_arg('kind', KIND_NAMES, default='rsm')
    d, n = _shape_args(kind)
    shape = default_shape(kind, config, d=d, spin_n=n)
    cfg = GenConfig(seed=_int_arg('seed', defaults['seed'], minimum=0, maximum=2 ** 64 - 1),
                    n_columns=_int_arg('cols', defaults['n_columns'], minimum=1, maximum=1000),
                    d=shape.d or defaults['d'], spin_n=shape.n or defaults['spin_n'],
                    distribution=defaults['distribution'])
    return Response(render(random_elements(shape, cfg)), mimetype='text/plain')


@app.route('/api/demo')
def demo_endpoint():
    seed = _int_arg('seed', current_config()['defaults']['demo_seed'], minimum=0, maximum=2 ** 64 - 1)
    return Response(cmd_demo(seed), mimetype='text/plain')


def find_available_port(start_port=5000, max_attempts=10, host='0.0.0.0'):
    """利用可能なポート番号を探す"""
    for port in range(start_port, start_port + max_attempts):
        try:
            sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            sock.bind((host, port))
            sock.close()
            return port
        except OSError:
            continue

    logger.warning(f"No available port found between {start_port} and {start_port + max_attempts - 1}")
    return start_port


def run_server(config=None, port=None):
    config = config or get_config()
    app.config['JORDAN_CONFIG'] = config
    setup_logging(config)
    host = config['server']['host']
    port = find_available_port(port or config['server']['port'], host=host)

    print("--- Jordan Identity Verifier Starting ---")
    print(f"Access from this PC: http://127.0.0.1:{port}/api/status")
    print("-" * 40)

    app.start_time = time.time()
    app.run(host=host, port=port, debug=False, use_reloader=False)


if __name__ == '__main__':
    run_server()
