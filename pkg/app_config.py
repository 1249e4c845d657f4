"""
ジョルダン代数検証ツール - 設定とログ

config.json の読み込み、既定値とのマージ、極性表（どの恒等式がどの代数で
成り立つと期待されるか）の参照、ログ設定をまとめたモジュール。
"""

import copy
import json
import logging
import logging.handlers
import os
from dataclasses import dataclass

from jordan_errors import ConfigError, UnsupportedCombinationError

logger = logging.getLogger(__name__)

BASE_DIR = os.path.dirname(os.path.abspath(__file__))
CONFIG_FILE = os.path.join(BASE_DIR, 'config.json')
LOG_DIR = os.path.join(BASE_DIR, 'logs')

KIND_NAMES = ('rsm', 'chm', 'qhm', 'albert', 'spin', 'oherm')
IDENTITY_NAMES = ('commute', 'distribute', 'associate', 'jordan', 'jacobson', 'g8', 'g9')

_ALL_KINDS = list(KIND_NAMES)
_SPECIAL = ['rsm', 'chm', 'qhm', 'spin']

DEFAULT_CONFIG = {
    'defaults': {
        'seed': 0,
        'trials': 100,
        'n_columns': 3,
        'd': 5,
        'spin_n': 5,
        'oherm_d': 4,
        'distribution': 'standard_normal',
        'workers': 1,
        'demo_seed': 0,
    },
    'tolerances': {
        'commute': 0.0,
        'distribute': 1e-12,
        'associate': 1e-12,
        'jordan': 1e-10,
        'jacobson': 1e-9,
        'g8': 1e-9,
        'g9': 1e-9,
        'symmetry': 1e-13,
        'dense_oracle': 1e-13,
        'u_oracle': 1e-12,
    },
    'failure_floors': {
        'associate': 1e-6,
        'jordan': 1e-6,
        'g8': 1e-3,
        'g9': 1e-3,
    },
    'polarity': [
        {'identity': 'commute', 'kinds': _ALL_KINDS, 'expect': 'hold', 'evidence': 'paper'},
        {'identity': 'distribute', 'kinds': _ALL_KINDS, 'expect': 'hold', 'evidence': 'paper'},
        {'identity': 'associate', 'kinds': _ALL_KINDS, 'min_dim': 2, 'expect': 'fail', 'evidence': 'paper'},
        {'identity': 'associate', 'kinds': ['rsm', 'chm', 'qhm', 'spin', 'oherm'], 'max_dim': 1,
         'expect': 'hold', 'evidence': 'derived'},
        {'identity': 'jordan', 'kinds': ['rsm', 'chm', 'qhm', 'albert', 'spin'], 'expect': 'hold', 'evidence': 'paper'},
        {'identity': 'jordan', 'kinds': ['oherm'], 'max_dim': 3, 'expect': 'hold', 'evidence': 'derived'},
        {'identity': 'jordan', 'kinds': ['oherm'], 'min_dim': 4, 'expect': 'fail', 'evidence': 'paper'},
        {'identity': 'jacobson', 'kinds': ['rsm', 'chm', 'qhm', 'albert', 'spin'], 'expect': 'hold', 'evidence': 'paper'},
        {'identity': 'g8', 'kinds': _SPECIAL, 'expect': 'hold', 'evidence': 'paper'},
        {'identity': 'g8', 'kinds': ['albert'], 'expect': 'fail', 'evidence': 'paper'},
        {'identity': 'g9', 'kinds': ['rsm', 'chm', 'qhm'], 'expect': 'hold', 'evidence': 'paper'},
        {'identity': 'g9', 'kinds': ['spin'], 'expect': 'hold', 'evidence': 'unverified-by-paper'},
        {'identity': 'g9', 'kinds': ['albert'], 'expect': 'fail', 'evidence': 'paper'},
    ],
    'logging': {
        'console_level': 'WARNING',
        'file_level': 'DEBUG',
        'log_to_file': True,
        'log_file': 'jordan_verify.log',
        'max_bytes': 10 * 1024 * 1024,  # 10MB
        'backup_count': 5,
    },
    'server': {
        'host': '0.0.0.0',
        'port': 5000,
        'max_trials': 1000,
    },
}

REQUIRED_KEYS = ('defaults', 'tolerances', 'failure_floors', 'polarity', 'logging', 'server')

_logging_ready = False


def load_config(path=None):
    """設定ファイルを読み込む（失敗時はログを出して None を返す）"""
    config_path = path or CONFIG_FILE
    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = json.load(f)
            logger.info(f"Config loaded successfully: {config_path}")
            return config
    except FileNotFoundError:
        logger.error(f"Config file not found: {config_path}")
        return None
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in config file: {e}")
        return None
    except Exception as e:
        logger.error(f"Failed to load config: {e}")
        return None


def _merge(base, override):
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            # リストは丸ごと置き換える（極性表は部分上書きしない）
            merged[key] = copy.deepcopy(value)
    return merged


def get_config(path=None):
    """既定値にファイルの内容を重ねた実効設定を返す"""
    loaded = load_config(path)
    if loaded is None:
        if path is not None:
            raise ConfigError(f"設定ファイルを読み込めません: {path}")
        logger.warning("Falling back to built-in default config")
        return copy.deepcopy(DEFAULT_CONFIG)
    if not isinstance(loaded, dict):
        raise ConfigError("設定ファイルの最上位はオブジェクトである必要があります")
    return _merge(DEFAULT_CONFIG, loaded)


def setup_logging(config=None, log_to_file=None):
    """ログ設定：ファイルローテーション付き（二重登録はしない）"""
    global _logging_ready
    if _logging_ready:
        return logging.getLogger()

    settings = (config or DEFAULT_CONFIG)['logging']
    if log_to_file is None:
        log_to_file = settings.get('log_to_file', True)

    root = logging.getLogger()
    root.setLevel(logging.DEBUG)

    # コンソールハンドラ（stderr。レポート本文の stdout とは分ける）
    console_handler = logging.StreamHandler()
    console_handler.setFormatter(logging.Formatter('%(asctime)s - %(levelname)s - %(message)s'))
    console_handler.setLevel(settings.get('console_level', 'WARNING'))
    root.addHandler(console_handler)

    if log_to_file:
        try:
            os.makedirs(LOG_DIR, exist_ok=True)
            file_handler = logging.handlers.RotatingFileHandler(
                os.path.join(LOG_DIR, settings.get('log_file', 'jordan_verify.log')),
                maxBytes=settings.get('max_bytes', 10 * 1024 * 1024),
                backupCount=settings.get('backup_count', 5),
                encoding='utf-8'
            )
            file_handler.setFormatter(
                logging.Formatter('%(asctime)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'))
            file_handler.setLevel(settings.get('file_level', 'DEBUG'))
            root.addHandler(file_handler)
            logging.getLogger('werkzeug').addHandler(file_handler)
        except OSError as e:
            logger.warning(f"File logging disabled: {e}")

    _logging_ready = True
    return root


@dataclass(frozen=True)
class PolarityRule:
    """極性表の1行"""
    identity: str
    kind: str
    expect: str
    evidence: str

    @property
    def expect_failure(self):
        return self.expect == 'fail'


def _rule_matches(rule, identity, kind, dim):
    if rule.get('identity') != identity or kind not in rule.get('kinds', []):
        return False
    if 'min_dim' in rule and dim < rule['min_dim']:
        return False
    if 'max_dim' in rule and dim > rule['max_dim']:
        return False
    return True


def lookup_polarity(identity, kind, dim, config=None):
    """(恒等式, 種類, 次元) に対する期待極性を返す。該当なしは未対応エラー"""
    config = config or DEFAULT_CONFIG
    for rule in config['polarity']:
        if _rule_matches(rule, identity, kind, dim):
            if rule['expect'] not in ('hold', 'fail'):
                raise ConfigError(f"極性 expect の値が不正です: {rule['expect']}")
            return PolarityRule(identity, kind, rule['expect'], rule.get('evidence', 'derived'))
    raise UnsupportedCombinationError(
        f"恒等式 '{identity}' は種類 '{kind}' (次元 {dim}) では未対応です")


def tolerance_for(identity, config=None):
    """単位スケールでの合格許容誤差"""
    config = config or DEFAULT_CONFIG
    try:
        return float(config['tolerances'][identity])
    except KeyError:
        raise ConfigError(f"許容誤差が設定されていません: {identity}")


def failure_floor_for(identity, config=None):
    """期待される失敗を判定する下限（未設定なら None）"""
    config = config or DEFAULT_CONFIG
    value = config['failure_floors'].get(identity)
    return None if value is None else float(value)
