"""
残差レポート

恒等式の検証結果（試行ごとの最大絶対残差とその最大値）を保持する。
試行ごとの閾値・下限があれば、判定は試行ごとに行う。
"""

from dataclasses import dataclass

from jordan_errors import ShapeError

NOTE_FAILURE_CONFIRMED = 'expected-failure confirmed'
NOTE_FAILURE_MISSING = 'expected-failure missing'


def _floats(values):
    return None if values is None else tuple(float(v) for v in values)


@dataclass(frozen=True)
class ResidualReport:
    shape: object
    identity_name: str
    trials: int
    max_abs: float
    per_trial_max: tuple
    seed: int = None
    degree: int = None
    scale: float = 1.0
    threshold: float = None
    failure_floor: float = None
    expect_failure: bool = False
    note: str = ''
    per_trial_threshold: tuple = None
    per_trial_floor: tuple = None

    def __post_init__(self):
        per_trial = tuple(float(v) for v in self.per_trial_max)
        object.__setattr__(self, 'per_trial_max', per_trial)
        if self.trials < 1 or len(per_trial) != self.trials:
            raise ShapeError(f"試行数が不正です: trials={self.trials}, 記録数={len(per_trial)}",
                             expected=self.trials, actual=len(per_trial))
        if float(self.max_abs) != max(per_trial):
            raise ShapeError("max_abs が試行ごとの最大値と一致しません")
        object.__setattr__(self, 'max_abs', float(self.max_abs))
        for name in ('per_trial_threshold', 'per_trial_floor'):
            values = _floats(getattr(self, name))
            if values is not None and len(values) != self.trials:
                raise ShapeError(f"{name} の数が試行数と一致しません: {len(values)} != {self.trials}",
                                 expected=self.trials, actual=len(values))
            object.__setattr__(self, name, values)

    @property
    def kind(self):
        return self.shape.kind

    @property
    def trial_passed(self):
        """試行ごとの合否（試行ごとの閾値が無ければ None）"""
        if self.per_trial_threshold is None:
            return None
        return tuple(r <= t for r, t in zip(self.per_trial_max, self.per_trial_threshold))

    @property
    def trials_over_threshold(self):
        flags = self.trial_passed
        return None if flags is None else sum(1 for ok in flags if not ok)

    @property
    def trials_over_floor(self):
        """下限を超えた試行の数"""
        if self.per_trial_floor is None:
            return None
        return sum(1 for r, f in zip(self.per_trial_max, self.per_trial_floor) if r > f)

    @property
    def passed(self):
        """合格閾値以下か（閾値未設定なら None）"""
        if self.per_trial_threshold is not None:
            return self.trials_over_threshold == 0
        if self.threshold is None:
            return None
        return self.max_abs <= self.threshold

    @property
    def failure_confirmed(self):
        """期待される失敗が下限を超えて観測されたか"""
        if self.per_trial_floor is not None:
            return self.trials_over_floor > 0
        if self.failure_floor is None:
            return False
        return self.max_abs > self.failure_floor

    @classmethod
    def single(cls, shape, identity_name, residual, threshold=None):
        """1回分の残差からレポートを作る"""
        return cls(shape=shape, identity_name=identity_name, trials=1,
                   max_abs=float(residual), per_trial_max=(float(residual),), threshold=threshold)
