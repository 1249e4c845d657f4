"""
合成代数 ℝ, ℂ, ℍ, 𝕆 の演算

Cayley-Dickson の倍加 (p,q)(r,s) = (pr - s̄q, sp + q r̄) で積を定義する。
係数の並びは 𝕆 で (Re, i, j, k, l, il, jl, kl)。𝕆 = ℍ ⊕ ℍl。

配列版 (cd_product_array, table_product_array, conjugate_array) は最後の軸を
係数軸としてブロードキャストする。行列の一括積では基底の積の表
(multiplication_table) を一度だけ作り、係数ごとの添字の取り出しで積を取る。
"""

import math
import numbers
from functools import lru_cache

import numpy as np

from jordan_errors import ShapeError

VALID_LENGTHS = (1, 2, 4, 8)

BASIS_LABELS = {
    1: ('Re',),
    2: ('Re', 'i'),
    4: ('Re', 'i', 'j', 'k'),
    8: ('Re', 'i', 'j', 'k', 'l', 'il', 'jl', 'kl'),
}

ALGEBRA_NAMES = {1: 'real', 2: 'complex', 4: 'quaternion', 8: 'octonion'}


def conjugate_array(a):
    """虚部の係数をすべて反転する"""
    out = -np.asarray(a, dtype=np.float64)
    out[..., 0] = -out[..., 0]
    return out


def cd_product_array(a, b):
    """Cayley-Dickson 積（最後の軸が係数）"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n = a.shape[-1]
    if b.shape[-1] != n:
        raise ShapeError(f"係数の長さが一致しません: {n} と {b.shape[-1]}",
                         expected=n, actual=b.shape[-1])
    if n == 1:
        return a * b
    h = n // 2
    p, q = a[..., :h], a[..., h:]
    r, s = b[..., :h], b[..., h:]
    first = cd_product_array(p, r) - cd_product_array(conjugate_array(s), q)
    second = cd_product_array(s, p) + cd_product_array(q, conjugate_array(r))
    return np.concatenate([first, second], axis=-1)


@lru_cache(maxsize=None)
def multiplication_table(length):
    """基底の積 e_p e_q = ±e_c の表

    partner[p, c] は e_p e_q が ±e_c になる q、sign[p, c] はその符号。
    """
    if length not in VALID_LENGTHS:
        raise ShapeError(f"係数の数は 1, 2, 4, 8 のいずれかです（{length} 個）",
                         expected=VALID_LENGTHS, actual=length)
    eye = np.eye(length)
    table = cd_product_array(eye[:, np.newaxis, :], eye[np.newaxis, :, :])
    partner = np.argmax(np.abs(table), axis=1)
    sign = np.take_along_axis(table, partner[:, np.newaxis, :], axis=1)[:, 0, :]
    partner.flags.writeable = False
    sign.flags.writeable = False
    return partner, sign


def table_product_array(a, b):
    """基底の積の表による積（cd_product_array と同じ値、係数の和は p の順）"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n = a.shape[-1]
    if b.shape[-1] != n:
        raise ShapeError(f"係数の長さが一致しません: {n} と {b.shape[-1]}",
                         expected=n, actual=b.shape[-1])
    partner, sign = multiplication_table(n)
    out = None
    for p in range(n):
        term = sign[p] * a[..., p:p + 1] * b[..., partner[p]]
        out = term if out is None else out + term
    return out


class CompositionNumber:
    """ℝ/ℂ/ℍ/𝕆 の元（1, 2, 4, 8 個の倍精度係数、不変）"""

    __slots__ = ('_coeffs',)

    def __init__(self, coeffs):
        if isinstance(coeffs, numbers.Real):
            coeffs = (coeffs,)
        arr = np.array(coeffs, dtype=np.float64).reshape(-1)
        if arr.size not in VALID_LENGTHS:
            raise ShapeError(f"係数の数は 1, 2, 4, 8 のいずれかです（{arr.size} 個）",
                             expected=VALID_LENGTHS, actual=arr.size)
        arr.flags.writeable = False
        self._coeffs = arr

    @classmethod
    def basis(cls, length, index):
        """基底元 e_index"""
        coeffs = np.zeros(length)
        coeffs[index] = 1.0
        return cls(coeffs)

    @classmethod
    def zero(cls, length):
        return cls(np.zeros(length))

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def length(self):
        return self._coeffs.size

    @property
    def labels(self):
        return BASIS_LABELS[self.length]

    @property
    def real(self):
        return float(self._coeffs[0])

    def conjugate(self):
        return cd_conjugate(self)

    def norm(self):
        return cd_norm(self)

    def __add__(self, other):
        if isinstance(other, numbers.Real):
            other = _promote(other, self.length)
        return cd_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, numbers.Real):
            other = _promote(other, self.length)
        return cd_add(self, cd_scale(-1.0, other))

    def __neg__(self):
        return cd_scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, CompositionNumber):
            return cd_multiply(self, other)
        if isinstance(other, numbers.Real):
            return cd_scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return cd_scale(other, self)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, CompositionNumber):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self._coeffs, other._coeffs))

    def __hash__(self):
        return hash(tuple(self._coeffs.tolist()))

    def __repr__(self):
        terms = ', '.join(f"{label}={value:g}" for label, value in zip(self.labels, self._coeffs))
        return f"{ALGEBRA_NAMES[self.length]}({terms})"


def _promote(value, length):
    coeffs = np.zeros(length)
    coeffs[0] = float(value)
    return CompositionNumber(coeffs)


def _check_same_length(a, b):
    if a.length != b.length:
        raise ShapeError(f"係数の長さが一致しません: {a.length} と {b.length}",
                         expected=a.length, actual=b.length)


def cd_multiply(a, b):
    """Cayley-Dickson 積"""
    _check_same_length(a, b)
    return CompositionNumber(cd_product_array(a.coeffs, b.coeffs))


def cd_conjugate(a):
    """共役"""
    return CompositionNumber(conjugate_array(a.coeffs))


def cd_add(a, b):
    _check_same_length(a, b)
    return CompositionNumber(a.coeffs + b.coeffs)


def cd_scale(alpha, a):
    return CompositionNumber(float(alpha) * a.coeffs)


def cd_norm(a):
    """ユークリッドノルム sqrt(Σ c²)"""
    return math.sqrt(float(np.dot(a.coeffs, a.coeffs)))


def associator(a, b, c):
    """(ab)c - a(bc)"""
    return cd_multiply(cd_multiply(a, b), c) - cd_multiply(a, cd_multiply(b, c))


def non_associative_basis_triples(length=8):
    """虚数単位の三つ組で (e_a e_b) e_c ≠ e_a (e_b e_c) となるものを列挙する"""
    units = [CompositionNumber.basis(length, i) for i in range(1, length)]
    witnesses = []
    for ia, ea in enumerate(units, start=1):
        for ib, eb in enumerate(units, start=1):
            for ic, ec in enumerate(units, start=1):
                if np.any(associator(ea, eb, ec).coeffs != 0.0):
                    witnesses.append((ia, ib, ic))
    return witnesses
