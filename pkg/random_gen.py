"""
シード付き乱数による元の生成

乱数源は numpy の Philox（カウンタ型）で、鍵は key = seed + stream·2^64。
同じ (seed, stream) からは実行環境によらず同じ生の 64bit 列が得られる。

一様乱数: u = ((raw >> 11) + 0.5)·2^-53  （開区間 (0,1)）
正規乱数: Box-Muller。生出力を2つずつ (u1, u2) として消費し、
          r = sqrt(-2 ln u1), θ = 2π u2 から (r cos θ, r sin θ) をこの順に出す。
          count 個要求すると 2·ceil(count/2) 個の生出力を消費する。

列は先頭から順に埋める（列 j はパック長ぶんの連続した乱数）。
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from jordan_elements import AlgebraShape, JordanVector, Kind
from jordan_errors import ConfigError

logger = logging.getLogger(__name__)

_TWO_POW_64 = 1 << 64


class Distribution(str, Enum):
    STANDARD_NORMAL = 'standard_normal'
    ROUNDED_NORMAL_2DP = 'rounded_normal_2dp'


@dataclass(frozen=True)
class GenConfig:
    """乱数生成の設定"""
    seed: int = 0
    n_columns: int = 3
    d: int = 5
    spin_n: int = 5
    distribution: Distribution = Distribution.STANDARD_NORMAL
    round_display: bool = False
    stream: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, 'distribution', Distribution(self.distribution))
        except ValueError:
            raise ConfigError(f"不明な分布です: {self.distribution}")
        if not 0 <= int(self.seed) < _TWO_POW_64:
            raise ConfigError(f"seed は 0 以上 2^64 未満の整数です: {self.seed}")
        if not 0 <= int(self.stream) < _TWO_POW_64:
            raise ConfigError(f"stream は 0 以上 2^64 未満の整数です: {self.stream}")
        if int(self.d) < 1:
            raise ConfigError(f"d は 1 以上が必要です: {self.d}")
        if int(self.spin_n) < 1:
            raise ConfigError(f"spin_n は 1 以上が必要です: {self.spin_n}")
        if int(self.n_columns) < 1:
            raise ConfigError(f"n_columns は 1 以上が必要です: {self.n_columns}")


class PhiloxNormalStream:
    """Philox の生出力から一様乱数・正規乱数を作る（所有者は1つ）"""

    def __init__(self, seed, stream=0):
        self.seed = int(seed)
        self.stream = int(stream)
        self._bitgen = np.random.Philox(key=self.seed + self.stream * _TWO_POW_64)

    def uniforms(self, count):
        raw = self._bitgen.random_raw(count)
        return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53

    def normals(self, count):
        pairs = (count + 1) // 2
        u = self.uniforms(2 * pairs)
        radius = np.sqrt(-2.0 * np.log(u[0::2]))
        theta = 2.0 * np.pi * u[1::2]
        out = np.empty(2 * pairs)
        out[0::2] = radius * np.cos(theta)
        out[1::2] = radius * np.sin(theta)
        return out[:count]


def shape_for(kind, cfg, ip_weights=None):
    """設定から形状を作る"""
    kind = Kind.parse(kind)
    if kind is Kind.SPIN:
        return AlgebraShape.spin(cfg.spin_n, ip_weights)
    if kind is Kind.ALBERT:
        return AlgebraShape.albert()
    return AlgebraShape(kind, d=cfg.d)


def _check_consistent(shape, cfg):
    if shape.kind is Kind.SPIN:
        if shape.n != cfg.spin_n:
            raise ConfigError(f"spin の次元が設定と一致しません: n={shape.n}, spin_n={cfg.spin_n}")
    elif shape.kind is not Kind.ALBERT and shape.d != cfg.d:
        raise ConfigError(f"行列の次元が設定と一致しません: d={shape.d}, 設定 d={cfg.d}")


def random_elements(shape, cfg):
    """n_columns 個の独立な元を生成する"""
    _check_consistent(shape, cfg)
    length = shape.packed_length
    draws = PhiloxNormalStream(cfg.seed, cfg.stream).normals(length * cfg.n_columns)
    if cfg.distribution is Distribution.ROUNDED_NORMAL_2DP:
        draws = np.round(draws, 2)
    block = draws.reshape(cfg.n_columns, length).T
    logger.debug(f"Generated {cfg.n_columns} {shape.label()} elements (seed={cfg.seed}, stream={cfg.stream})")
    return JordanVector(shape, block)


def trial_operands(shape, seed, trial, distribution=Distribution.STANDARD_NORMAL, count=3):
    """検証試行 trial 用の x, y, z（ストリーム trial+1 から連続に取る）"""
    cfg = GenConfig(seed=seed, n_columns=count, d=shape.d or 1, spin_n=shape.n or 1,
                    distribution=distribution, stream=trial + 1)
    return random_elements(shape, cfg).columns


def _generate(kind, n, seed, distribution, d=5, spin_n=5, ip_weights=None):
    cfg = GenConfig(seed=seed, n_columns=n, d=d, spin_n=spin_n, distribution=distribution)
    return random_elements(shape_for(kind, cfg, ip_weights), cfg)


def rrsm(n=3, d=5, seed=0, distribution=Distribution.STANDARD_NORMAL):
    """Random Real Symmetric Matrix"""
    return _generate(Kind.RSM, n, seed, distribution, d=d)


def rchm(n=3, d=5, seed=0, distribution=Distribution.STANDARD_NORMAL):
    return _generate(Kind.CHM, n, seed, distribution, d=d)


def rqhm(n=3, d=5, seed=0, distribution=Distribution.STANDARD_NORMAL):
    return _generate(Kind.QHM, n, seed, distribution, d=d)


def ralbert(n=3, seed=0, distribution=Distribution.STANDARD_NORMAL):
    return _generate(Kind.ALBERT, n, seed, distribution)


def roherm(n=3, d=4, seed=0, distribution=Distribution.STANDARD_NORMAL):
    return _generate(Kind.OHERM, n, seed, distribution, d=d)


def rspin(n=3, spin_n=5, seed=0, distribution=Distribution.STANDARD_NORMAL, ip_weights=None):
    return _generate(Kind.SPIN, n, seed, distribution, spin_n=spin_n, ip_weights=ip_weights)
