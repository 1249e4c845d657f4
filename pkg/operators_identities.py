"""
高次の作用素と多項式恒等式

  L_x(y)      = x∘y
  U_x(y)      = 2x∘(x∘y) - (x∘x)∘y
  U_{x,y}(z)  = x∘(y∘z) + y∘(x∘z) - (x∘y)∘z
  {x,y,z}     = 2(x∘(y∘z) + (x∘y)∘z - (x∘z)∘y)
  H8(x,y,z)   = {U_x U_y(z), z, x∘y} - U_x U_y U_z(x∘y)
  H9(x,y,z)   = 2·(U_x(z) ∘ U_{y,x}U_z(y∘y)) - U_x U_z U_{x,y} U_y(z)
  G8 = H8(x,y,z) - H8(y,x,z),  G9 = H9(x,y,z) - H9(y,x,z)

identity_suite は試行ごとに独立した乱数ストリームから x, y, z を取り、
全試行を列に並べて恒等式の差を一度に計算する。試行 t の閾値は
tol·Π max(1, ‖v‖∞)^e_v（v = x, y, z、e_v はその変数についての次数）で、
判定は試行ごとに行う。
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import repeat
from typing import Callable

import numpy as np

from app_config import DEFAULT_CONFIG, failure_floor_for, lookup_polarity, tolerance_for
from jordan_elements import JordanVector, Kind, _check_shapes, pack_hermitian, to_dense
from jordan_errors import ConfigError, UnsupportedKindError
from jordan_product import jordan_product, naive_matmul
from random_gen import Distribution, trial_operands
from residual_report import NOTE_FAILURE_CONFIRMED, NOTE_FAILURE_MISSING, ResidualReport

logger = logging.getLogger(__name__)


def op_L(x):
    """左乗法作用素 L_x"""
    def apply(y):
        return jordan_product(x, y)
    return apply


def op_U(x):
    """二次作用素 U_x"""
    def apply(y):
        _check_shapes(x, y)
        return 2 * (x * (x * y)) - (x * x) * y
    return apply


def op_U2(x, y):
    """線形化した二次作用素 U_{x,y}"""
    _check_shapes(x, y)
    xy = x * y

    def apply(z):
        return op_L(x)(op_L(y)(z)) + op_L(y)(op_L(x)(z)) - op_L(xy)(z)
    return apply


def triple_bracket(x, y, z):
    """三重積 {x,y,z}"""
    _check_shapes(x, y)
    _check_shapes(x, z)
    return 2 * (x * (y * z) + (x * y) * z - (x * z) * y)


def h8(x, y, z):
    U = op_U
    xy = x * y
    return triple_bracket(U(x)(U(y)(z)), z, xy) - U(x)(U(y)(U(z)(xy)))


def h9(x, y, z):
    # 先頭項の並置は U_x(z) と U_{y,x}U_z(y∘y) のジョルダン積
    U = op_U
    first = U(x)(z) * op_U2(y, x)(U(z)(y * y))
    return 2 * first - U(x)(U(z)(op_U2(x, y)(U(y)(z))))


def g8(x, y, z):
    return h8(x, y, z) - h8(y, x, z)


def g9(x, y, z):
    return h9(x, y, z) - h9(y, x, z)


# ---- 恒等式の差（すべて 0 になれば恒等式が成り立つ） ----

def commute_difference(x, y, z):
    return x * y - y * x


def distribute_difference(x, y, z):
    return x * (y + z) - (x * y + x * z)


def associate_difference(x, y, z):
    return x * (y * z) - (x * y) * z


def jordan_difference(x, y, z):
    xx = x * x
    return (x * y) * xx - x * (y * xx)


def jacobson_difference(x, y, z):
    U = op_U
    return U(x)(U(y)(U(x)(z))) - U(U(x)(y))(z)


def _column_norms(v):
    if isinstance(v, JordanVector):
        return v.column_max_abs()
    return np.array([v.max_abs()])


@dataclass(frozen=True)
class IdentityCheck:
    """恒等式の差と、x, y, z それぞれについての次数"""
    difference: Callable
    exponents: tuple

    @property
    def degree(self):
        return sum(self.exponents)

    def scale(self, x, y, z):
        """列ごとの尺度 Π max(1, ‖v‖∞)^e"""
        factor = 1.0
        for v, e in zip((x, y, z), self.exponents):
            if e:
                factor = factor * np.maximum(1.0, _column_norms(v)) ** e
        return factor


# distribute は y, z の片方ずつに1次なので ‖x‖·‖y‖·‖z‖ で上から抑える
IDENTITIES = {
    'commute': IdentityCheck(commute_difference, (1, 1, 0)),
    'distribute': IdentityCheck(distribute_difference, (1, 1, 1)),
    'associate': IdentityCheck(associate_difference, (1, 1, 1)),
    'jordan': IdentityCheck(jordan_difference, (3, 1, 0)),
    'jacobson': IdentityCheck(jacobson_difference, (4, 2, 1)),
    'g8': IdentityCheck(g8, (3, 3, 2)),
    'g9': IdentityCheck(g9, (3, 3, 3)),
}


def jacobson_residual(x, y, z, tol=None):
    """U_x U_y U_x(z) - U_{U_x(y)}(z) の最大絶対値"""
    check = IDENTITIES['jacobson']
    residual = check.difference(x, y, z).max_abs()
    scale = float(check.scale(x, y, z)[0])
    tol = tolerance_for('jacobson') if tol is None else tol
    return ResidualReport(shape=x.shape, identity_name='jacobson', trials=1, max_abs=residual,
                          per_trial_max=(residual,), degree=check.degree, scale=scale,
                          threshold=tol * scale, per_trial_threshold=(tol * scale,))


def u_oracle_check(x, y):
    """特殊代数で U_x(y) と密行列の x·y·x を比べる（rsm/chm/qhm のみ）"""
    _check_shapes(x, y)
    if x.kind not in (Kind.RSM, Kind.CHM, Kind.QHM):
        raise UnsupportedKindError(f"U のオラクル比較は rsm/chm/qhm のみです: {x.kind.value}")
    mx, my = to_dense(x), to_dense(y)
    oracle = pack_hermitian(naive_matmul(naive_matmul(mx, my), mx).entries, x.shape)
    residual = float(np.max(np.abs(op_U(x)(y).coords - oracle.coords), initial=0.0))
    return ResidualReport.single(x.shape, 'u_oracle', residual)


def suite_residuals(shape, identity, seed, trials, distribution=Distribution.STANDARD_NORMAL):
    """試行 trials（range など）をまとめて評価し、試行ごとの残差と尺度を返す

    各試行の x, y, z を列に並べたベクトルで差を一度に計算する。
    """
    check = IDENTITIES[identity]
    trials = list(trials)
    if not trials:
        return [], []
    operands = [trial_operands(shape, seed, trial, distribution) for trial in trials]
    x, y, z = (JordanVector.from_columns(ops[i] for ops in operands) for i in range(3))
    residual = check.difference(x, y, z).column_max_abs()
    return residual.tolist(), np.broadcast_to(check.scale(x, y, z), residual.shape).tolist()


def _chunks(trials, workers):
    size = -(-trials // workers)
    return [range(start, min(start + size, trials)) for start in range(0, trials, size)]


def identity_suite(shape, identity, trials=100, seed=0, tol=None, failure_floor=None,
                   config=None, workers=1, distribution=Distribution.STANDARD_NORMAL):
    """シード付きの乱数三つ組で恒等式を検証する（判定は試行ごとの閾値で行う）"""
    config = config or DEFAULT_CONFIG
    if identity not in IDENTITIES:
        raise ConfigError(f"不明な恒等式です: {identity}（{', '.join(IDENTITIES)} のいずれか）")
    if int(trials) < 1:
        raise ConfigError(f"trials は 1 以上が必要です: {trials}")
    trials = int(trials)
    distribution = Distribution(distribution)

    polarity = lookup_polarity(identity, shape.kind.value, shape.dim, config)
    check = IDENTITIES[identity]
    tol = tolerance_for(identity, config) if tol is None else float(tol)
    if failure_floor is None and polarity.expect_failure:
        failure_floor = failure_floor_for(identity, config)
        if failure_floor is None:
            raise ConfigError(f"期待される失敗の下限が設定されていません: {identity}")

    logger.info(f"Running {identity} suite on {shape.label()} ({trials} trials, seed={seed})")

    if workers and workers > 1 and trials > 1:
        chunks = _chunks(trials, min(int(workers), trials))
        with ProcessPoolExecutor(max_workers=len(chunks)) as executor:
            parts = list(executor.map(suite_residuals, repeat(shape), repeat(identity), repeat(seed),
                                      chunks, repeat(distribution)))
        per_trial = [r for part in parts for r in part[0]]
        scales = [s for part in parts for s in part[1]]
    else:
        per_trial, scales = suite_residuals(shape, identity, seed, range(trials), distribution)

    thresholds = tuple(tol * s for s in scales)
    floors = None if failure_floor is None else tuple(failure_floor * s for s in scales)
    report = ResidualReport(shape=shape, identity_name=identity, trials=trials, max_abs=max(per_trial),
                            per_trial_max=tuple(per_trial), seed=seed, degree=check.degree,
                            scale=max(scales), threshold=max(thresholds),
                            failure_floor=None if floors is None else min(floors),
                            expect_failure=polarity.expect_failure,
                            per_trial_threshold=thresholds, per_trial_floor=floors)

    if polarity.expect_failure:
        note = NOTE_FAILURE_CONFIRMED if report.failure_confirmed else NOTE_FAILURE_MISSING
    elif not report.passed:
        note = f"{report.trials_over_threshold}/{trials} trials over threshold"
    elif polarity.evidence == 'unverified-by-paper':
        note = 'unverified-by-paper'
    else:
        note = ''
    if note:
        report = replace(report, note=note)

    logger.info(f"{identity} on {shape.label()}: max_abs={report.max_abs:.3e} "
                f"threshold={report.threshold:.3e} {note}".rstrip())
    return report
