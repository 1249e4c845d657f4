#!/usr/bin/env python3
"""
ジョルダン代数 - 恒等式検証コマンド

使い方:
    python cli_verify.py verify --kind qhm --identity jordan --trials 3 --seed 1
    python cli_verify.py verify --identity all --format json-lines
    python cli_verify.py demo
    python cli_verify.py polarity
    python cli_verify.py random --kind rsm --d 2 --cols 1
    python cli_verify.py serve

終了コード: 0 = すべて pass / expected_failure_confirmed, 1 = それ以外, 2 = 使い方の誤り
"""

import argparse
import io
import json
import logging
import sys
from dataclasses import dataclass
from enum import Enum

import pandas as pd

from app_config import IDENTITY_NAMES, KIND_NAMES, get_config, lookup_polarity, setup_logging
from jordan_elements import AlgebraShape, Kind, format_vector, to_dense
from jordan_errors import ConfigError, JordanError, UnsupportedCombinationError
from jordan_product import dense_oracle_check, symmetry_preservation_check
from operators_identities import g8, g9, identity_suite, jacobson_difference
from random_gen import Distribution, GenConfig, random_elements, shape_for
from serialization import render

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class Verdict(str, Enum):
    PASS = 'pass'
    FAIL = 'fail'
    EXPECTED_FAILURE_CONFIRMED = 'expected_failure_confirmed'
    EXPECTED_FAILURE_MISSING = 'expected_failure_missing'

    @property
    def ok(self):
        return self in (Verdict.PASS, Verdict.EXPECTED_FAILURE_CONFIRMED)


@dataclass(frozen=True)
class SuiteOutcome:
    """1スイートの判定結果"""
    identity: str
    kind: str
    d: int
    n: int
    trials: int
    seed: int
    max_abs: float
    threshold: float
    verdict: Verdict
    expect: str
    evidence: str
    note: str = ''

    def to_record(self):
        """json-lines の1レコード（フィールド名は固定）"""
        return {
            'identity': self.identity,
            'kind': self.kind,
            'd': self.d,
            'n': self.n,
            'trials': self.trials,
            'seed': self.seed,
            'max_abs': self.max_abs,
            'threshold': self.threshold,
            'verdict': self.verdict.value,
            'expect': self.expect,
            'evidence': self.evidence,
            'note': self.note,
        }


def judge(report):
    """レポートと期待極性から判定を出す"""
    if report.expect_failure:
        return Verdict.EXPECTED_FAILURE_CONFIRMED if report.failure_confirmed else Verdict.EXPECTED_FAILURE_MISSING
    return Verdict.PASS if report.passed else Verdict.FAIL


def default_shape(kind, config, d=None, spin_n=None):
    """種類ごとの既定形状（既定: d=5, spin n=5, oherm d=4）"""
    kind = Kind.parse(kind)
    defaults = config['defaults']
    if kind is Kind.SPIN:
        return AlgebraShape.spin(spin_n or defaults['spin_n'])
    if kind is Kind.ALBERT:
        return AlgebraShape.albert()
    if kind is Kind.OHERM:
        return AlgebraShape.oherm(d or defaults['oherm_d'])
    return AlgebraShape(kind, d=d or defaults['d'])


def plan_suites(config, kind=None, identity='all', d=None, spin_n=None):
    """実行するスイート (形状, 恒等式) を種類順・恒等式順に並べる"""
    kinds = [kind] if kind else list(KIND_NAMES)
    identities = list(IDENTITY_NAMES) if identity == 'all' else [identity]
    explicit = kind is not None and identity != 'all'
    plan = []
    for kind_name in kinds:
        shape = default_shape(kind_name, config, d=d, spin_n=spin_n)
        for name in identities:
            try:
                lookup_polarity(name, shape.kind.value, shape.dim, config)
            except UnsupportedCombinationError:
                if explicit:
                    raise
                logger.debug(f"Skipping unsupported combination: {name} on {shape.label()}")
                continue
            plan.append((shape, name))
    if not plan:
        raise UnsupportedCombinationError(f"実行できる組み合わせがありません: kind={kind}, identity={identity}")
    return plan


def run_suites(plan, config, trials, seed, tol=None, distribution=Distribution.STANDARD_NORMAL, workers=1):
    outcomes = []
    for shape, name in plan:
        report = identity_suite(shape, name, trials=trials, seed=seed, tol=tol, config=config,
                                workers=workers, distribution=distribution)
        polarity = lookup_polarity(name, shape.kind.value, shape.dim, config)
        outcomes.append(SuiteOutcome(
            identity=name, kind=shape.kind.value, d=shape.d, n=shape.n, trials=report.trials,
            seed=seed, max_abs=report.max_abs,
            threshold=report.failure_floor if report.expect_failure else report.threshold,
            verdict=judge(report), expect=polarity.expect, evidence=polarity.evidence, note=report.note))
    return outcomes


def polarity_frame(config, identities=None):
    """極性表（データ）をそのまま表にする"""
    rows = []
    for rule in config['polarity']:
        if identities is not None and rule['identity'] not in identities:
            continue
        if 'min_dim' in rule:
            dims = f">={rule['min_dim']}"
        elif 'max_dim' in rule:
            dims = f"<={rule['max_dim']}"
        else:
            dims = 'any'
        rows.append({'identity': rule['identity'], 'kinds': ','.join(rule['kinds']), 'dim': dims,
                     'expect': rule['expect'], 'evidence': rule.get('evidence', 'derived')})
    return pd.DataFrame(rows, columns=['identity', 'kinds', 'dim', 'expect', 'evidence'])


def outcomes_frame(outcomes):
    rows = []
    for o in outcomes:
        rows.append({'identity': o.identity, 'kind': o.kind,
                     'd': '-' if o.d is None else o.d, 'n': '-' if o.n is None else o.n,
                     'trials': o.trials, 'seed': o.seed,
                     'max_abs': f"{o.max_abs:.3e}", 'threshold': f"{o.threshold:.3e}",
                     'verdict': o.verdict.value, 'note': o.note})
    return pd.DataFrame(rows, columns=['identity', 'kind', 'd', 'n', 'trials', 'seed',
                                       'max_abs', 'threshold', 'verdict', 'note'])


def format_text_report(outcomes, config):
    identities = sorted({o.identity for o in outcomes}, key=IDENTITY_NAMES.index)
    lines = ["*** Jordan identity verification ***", "", "Polarity table:",
             polarity_frame(config, identities).to_string(index=False), "", "Results:",
             outcomes_frame(outcomes).to_string(index=False), ""]
    passed = 0
    for o in outcomes:
        status = "PASS" if o.verdict.ok else "FAIL"
        dims = f"n={o.n}" if o.kind == 'spin' else f"d={o.d}"
        lines.append(f"{status}: {o.identity} {o.kind} {dims} ({o.verdict.value})")
        if o.verdict.ok:
            passed += 1
    lines.append("")
    lines.append(f"成功: {passed}/{len(outcomes)}")
    return '\n'.join(lines) + '\n'


def format_json_lines(outcomes):
    return ''.join(json.dumps(o.to_record(), ensure_ascii=False) + '\n' for o in outcomes)


def save_outcomes_csv(outcomes, path):
    """判定結果を CSV に保存する"""
    frame = pd.DataFrame([o.to_record() for o in outcomes])
    frame.to_csv(path, index=False, encoding='utf-8-sig')
    logger.info(f"Outcomes saved: {path} ({len(outcomes)} suites)")


def cmd_verify(args, config, out=None):
    """verify サブコマンド本体"""
    out = out or sys.stdout
    defaults = config['defaults']
    trials = args.trials if args.trials is not None else defaults['trials']
    seed = args.seed if args.seed is not None else defaults['seed']
    plan = plan_suites(config, kind=args.kind, identity=args.identity, d=args.d, spin_n=args.spin_n)
    outcomes = run_suites(plan, config, trials=trials, seed=seed, tol=args.tol,
                          distribution=Distribution(args.distribution or defaults['distribution']),
                          workers=args.workers or defaults['workers'])
    if args.format == 'json-lines':
        out.write(format_json_lines(outcomes))
    else:
        out.write(format_text_report(outcomes, config))
    if args.save_csv:
        save_outcomes_csv(outcomes, args.save_csv)
    status = EXIT_OK if all(o.verdict.ok for o in outcomes) else EXIT_FAILED
    logger.info(f"verify finished: {len(outcomes)} suites, exit status {status}")
    return status


def _draw(kind, seed, stream, n=3, d=5, spin_n=5):
    cfg = GenConfig(seed=seed, n_columns=n, d=d, spin_n=spin_n, stream=stream)
    return random_elements(shape_for(kind, cfg), cfg)


def _max_abs(v):
    return f"max abs residual: {v.max_abs():.3e}"


def cmd_demo(seed=0):
    """各代数の演算と恒等式の残差を順に示すテキストを固定シードで作る"""
    buf = io.StringIO()

    def say(*parts):
        for part in parts:
            buf.write(str(part) + '\n')

    def show_input(v):
        say(format_vector(v, round_display=True))

    say("=== Type 1: real symmetric matrices ===")
    x, y, z = (_draw('rsm', seed, stream) for stream in (0, 1, 2))
    say("> x <- rrsm()")
    show_input(x)
    say("> x*100", x * 100)
    say("> x + y*3", x + y * 3)
    say("> x + 100", x + 100)
    say("> x*y", x * y)
    distributive = x * (y + z) - (x * y + x * z)
    say("> x*(y+z) - (x*y + x*z)", distributive, _max_abs(distributive))
    associative = x * (y * z) - (x * y) * z
    say("> x*(y*z) - (x*y)*z   # not associative", associative, _max_abs(associative))
    jordan = (x * y) * (x * x) - x * (y * (x * x))
    say("> (x*y)*(x*x) - x*(y*(x*x))   # Jordan identity", jordan, _max_abs(jordan))
    say("> M2 <- as.1matrix(x[2])", to_dense(x[1]))
    oracle = dense_oracle_check(x[0], x[1])
    say(f"> dense oracle (M1 M2 + M2 M1)/2 vs x[1]*x[2]: residual {oracle.max_abs:.3e}")
    symmetry = symmetry_preservation_check(x[0], x[1])
    say(f"> jj - t(jj): residual {symmetry.max_abs:.3e}", "")

    say("=== Type 3: quaternionic Hermitian matrices ===")
    small = _draw('qhm', seed, 3, n=1, d=2)
    say("> as.1matrix(rqhm(n=1,d=2))", to_dense(small[0]))
    qx, qy = _draw('qhm', seed, 4), _draw('qhm', seed, 5)
    qjordan = (qx * qy) * (qx * qx) - qx * (qy * (qx * qx))
    say("> (x*y)*(x*x) - x*(y*(x*x))", qjordan, _max_abs(qjordan), "")

    say("=== Type 5: spin factors ===")
    i_, j_, k_ = (_draw('spin', seed, stream) for stream in (6, 7, 8))
    say("> I <- rspin()")
    show_input(i_)
    say("> I*J - J*I   # commutative", i_ * j_ - j_ * i_)
    say("> I*(J+K) - (I*J + I*K)   # distributive", i_ * (j_ + k_) - (i_ * j_ + i_ * k_))
    say("> I*(J*K) - (I*J)*K   # not associative", i_ * (j_ * k_) - (i_ * j_) * k_)
    say("> (I*J)*(I*I) - I*(J*(I*I))   # Jordan identity", (i_ * j_) * (i_ * i_) - i_ * (j_ * (i_ * i_)), "")

    say("=== Type 4: Albert algebra ===")
    ax, ay = _draw('albert', seed, 9), _draw('albert', seed, 10)
    say("> x <- ralbert()")
    show_input(ax)
    say("> (x*y)*(x*x) - x*(y*(x*x))   # Jordan identity", (ax * ay) * (ax * ax) - ax * (ay * (ax * ax)), "")

    say("=== Special identities ===")
    for kind, base in (('albert', 11), ('qhm', 14), ('spin', 17)):
        a, b, c = (_draw(kind, seed, base + offset, n=1) for offset in range(3))
        residual = jacobson_difference(a[0], b[0], c[0])
        say(f"> Jacobson on {kind}: {_max_abs(residual)}")
    for label, identity in (('G8', g8), ('G9', g9)):
        for kind, base in (('qhm', 20), ('spin', 23), ('albert', 26)):
            if label == 'G9' and kind == 'spin':
                continue
            a, b, c = (_draw(kind, seed, base + offset, n=1) for offset in range(3))
            residual = identity(a[0], b[0], c[0])
            say(f"> {label} on {kind}: max abs residual: {residual.max_abs():.3e}")
    return buf.getvalue()


def cmd_polarity(config, out=None):
    out = out or sys.stdout
    out.write(polarity_frame(config).to_string(index=False) + '\n')
    return EXIT_OK


def cmd_random(args, config, out=None):
    out = out or sys.stdout
    defaults = config['defaults']
    shape = default_shape(args.kind, config, d=args.d, spin_n=args.spin_n)
    cfg = GenConfig(seed=args.seed if args.seed is not None else defaults['seed'],
                    n_columns=args.cols, d=shape.d or defaults['d'], spin_n=shape.n or defaults['spin_n'],
                    distribution=args.distribution or defaults['distribution'])
    out.write(render(random_elements(shape, cfg)))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='cli_verify', description='ジョルダン代数の恒等式を数値的に検証します')
    parser.add_argument('--config', help='設定ファイル (既定: config.json)')
    parser.add_argument('--no-log-file', action='store_true', help='ログファイルを書かない')
    sub = parser.add_subparsers(dest='command', required=True)

    verify = sub.add_parser('verify', help='恒等式スイートを実行')
    verify.add_argument('--kind', choices=KIND_NAMES)
    verify.add_argument('--d', type=int)
    verify.add_argument('--spin-n', type=int)
    verify.add_argument('--identity', choices=IDENTITY_NAMES + ('all',), default='all')
    verify.add_argument('--trials', type=int)
    verify.add_argument('--seed', type=int)
    verify.add_argument('--tol', type=float)
    verify.add_argument('--format', choices=('text', 'json-lines'), default='text')
    verify.add_argument('--distribution', choices=[d.value for d in Distribution])
    verify.add_argument('--workers', type=int)
    verify.add_argument('--save-csv', help='判定結果を CSV で保存')

    sub.add_parser('demo', help="演算と恒等式の残差を順に表示").add_argument('--seed', type=int)
    sub.add_parser('polarity', help='極性表を表示')

    random_cmd = sub.add_parser('random', help='乱数の元を jordan-v1 形式で出力')
    random_cmd.add_argument('--kind', choices=KIND_NAMES, required=True)
    random_cmd.add_argument('--d', type=int)
    random_cmd.add_argument('--spin-n', type=int)
    random_cmd.add_argument('--cols', type=int, default=3)
    random_cmd.add_argument('--seed', type=int)
    random_cmd.add_argument('--distribution', choices=[d.value for d in Distribution])

    serve = sub.add_parser('serve', help='HTTP API を起動')
    serve.add_argument('--port', type=int)
    return parser


def validate_args(parser, args):
    """フラグの組み合わせを検査する（誤りは parser.error で終了コード 2）"""
    kind = getattr(args, 'kind', None)
    d = getattr(args, 'd', None)
    spin_n = getattr(args, 'spin_n', None)
    if d is not None:
        if kind == 'spin':
            parser.error("--d は spin には指定できません")
        if kind == 'albert' and d != 3:
            parser.error("albert の次元は 3 に固定です")
        if d < 1:
            parser.error("--d は 1 以上が必要です")
    if spin_n is not None:
        if kind is not None and kind != 'spin':
            parser.error("--spin-n は spin のときだけ指定できます")
        if spin_n < 1:
            parser.error("--spin-n は 1 以上が必要です")
    for name in ('trials', 'cols', 'workers'):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            parser.error(f"--{name} は 1 以上が必要です")
    seed = getattr(args, 'seed', None)
    if seed is not None and not 0 <= seed < 2 ** 64:
        parser.error("--seed は 0 以上 2^64 未満です")
    tol = getattr(args, 'tol', None)
    if tol is not None and tol < 0:
        parser.error("--tol は 0 以上が必要です")


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        validate_args(parser, args)
    except SystemExit as e:
        return e.code

    try:
        config = get_config(args.config)
    except ConfigError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE
    setup_logging(config, log_to_file=False if args.no_log_file else None)

    try:
        if args.command == 'verify':
            return cmd_verify(args, config, out)
        if args.command == 'demo':
            seed = args.seed if args.seed is not None else config['defaults']['demo_seed']
            out.write(cmd_demo(seed))
            return EXIT_OK
        if args.command == 'polarity':
            return cmd_polarity(config, out)
        if args.command == 'random':
            return cmd_random(args, config, out)
        if args.command == 'serve':
            from verify_server import run_server
            run_server(config, port=args.port)
            return EXIT_OK
    except (UnsupportedCombinationError, ConfigError) as e:
        logger.error(f"Usage error: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE
    except JordanError as e:
        logger.error(f"Verification error: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_FAILED
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        print(f"ERROR: 予期しないエラー: {e}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
