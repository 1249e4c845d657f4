"""
ジョルダン代数の元 - 詰め込み（パック）表現

5種類の代数（rsm, chm, qhm, albert, spin）と一般の八元数エルミート行列 (oherm)
の元を、固定長の係数列（パック列）として保持する。

パック順序:
  - rsm:  下三角を列優先で並べる（vech 順、対角を含む）
  - その他の行列型: 対角成分（実数）を先に添字順、続いて狭義下三角を
    列優先で、各成分の係数を基底順に並べる
  - spin: (a, a_1, ..., a_n)

添字は内部では 0 始まり、表示は 1 始まり。
"""

import numbers
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
import pandas as pd

from composition_algebras import BASIS_LABELS, CompositionNumber, conjugate_array
from jordan_errors import ShapeError, UnsupportedKindError, ValidationError


HERMITIAN_TOLERANCE = 1e-12
DISPLAY_MAX_ROWS = 10


class Kind(str, Enum):
    """代数の種類"""
    RSM = 'rsm'
    CHM = 'chm'
    QHM = 'qhm'
    ALBERT = 'albert'
    SPIN = 'spin'
    OHERM = 'oherm'
    OCTONION_HERM_GENERAL = 'oherm'

    @property
    def is_matrix(self):
        return self is not Kind.SPIN

    @property
    def entry_length(self):
        """行列成分の係数の数（spin は None）"""
        return _ENTRY_LENGTHS[self]

    @property
    def description(self):
        return _DESCRIPTIONS[self]

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value)
        member = cls.__members__.get(text.upper())
        if member is not None:
            return member
        try:
            return cls(text.lower())
        except ValueError:
            names = ', '.join(k.value for k in cls)
            raise ShapeError(f"不明な代数の種類です: {value}（{names} のいずれか）")


_ENTRY_LENGTHS = {
    Kind.RSM: 1, Kind.CHM: 2, Kind.QHM: 4,
    Kind.ALBERT: 8, Kind.OHERM: 8, Kind.SPIN: None,
}

_DESCRIPTIONS = {
    Kind.RSM: 'real symmetric matrices',
    Kind.CHM: 'complex Hermitian matrices',
    Kind.QHM: 'quaternionic Hermitian matrices',
    Kind.ALBERT: 'Albert matrices',
    Kind.SPIN: 'spin objects',
    Kind.OHERM: 'octonionic Hermitian matrices',
}

_KIND_BY_ENTRY_LENGTH = {1: Kind.RSM, 2: Kind.CHM, 4: Kind.QHM}


@dataclass(frozen=True)
class AlgebraShape:
    """種類・次元・内積の重みを決める記述子"""
    kind: Kind
    d: int = None
    n: int = None
    ip_weights: tuple = None

    def __post_init__(self):
        kind = Kind.parse(self.kind)
        object.__setattr__(self, 'kind', kind)
        if kind is Kind.SPIN:
            if self.d is not None:
                raise ShapeError("spin では d を指定できません")
            if self.n is None or int(self.n) < 1:
                raise ShapeError(f"spin の次元 n は 1 以上が必要です: {self.n}")
            n = int(self.n)
            object.__setattr__(self, 'n', n)
            weights = (1.0,) * n if self.ip_weights is None else tuple(float(w) for w in self.ip_weights)
            if len(weights) != n:
                raise ShapeError(f"内積の重みの数が n と一致しません: {len(weights)} != {n}",
                                 expected=n, actual=len(weights))
            if not all(np.isfinite(w) and w > 0 for w in weights):
                raise ShapeError("内積の重みはすべて正の有限値である必要があります")
            object.__setattr__(self, 'ip_weights', weights)
            return

        if self.n is not None or self.ip_weights is not None:
            raise ShapeError(f"{kind.value} では n / ip_weights を指定できません")
        if kind is Kind.ALBERT:
            if self.d not in (None, 3):
                raise ShapeError(f"albert の次元は 3 に固定です: {self.d}", expected=3, actual=self.d)
            object.__setattr__(self, 'd', 3)
            return
        if self.d is None or int(self.d) < 1:
            raise ShapeError(f"行列の次元 d は 1 以上が必要です: {self.d}")
        object.__setattr__(self, 'd', int(self.d))

    @classmethod
    def rsm(cls, d=5):
        return cls(Kind.RSM, d=d)

    @classmethod
    def chm(cls, d=5):
        return cls(Kind.CHM, d=d)

    @classmethod
    def qhm(cls, d=5):
        return cls(Kind.QHM, d=d)

    @classmethod
    def albert(cls):
        return cls(Kind.ALBERT)

    @classmethod
    def spin(cls, n=5, ip_weights=None):
        return cls(Kind.SPIN, n=n, ip_weights=ip_weights)

    @classmethod
    def oherm(cls, d=4):
        return cls(Kind.OHERM, d=d)

    @property
    def packed_length(self):
        return packed_length(self)

    @property
    def dim(self):
        """極性表で使う次元（行列型は d、spin は n）"""
        return self.n if self.kind is Kind.SPIN else self.d

    @property
    def weights_array(self):
        return np.asarray(self.ip_weights, dtype=np.float64)

    def label(self):
        if self.kind is Kind.SPIN:
            return f"spin n={self.n}"
        return f"{self.kind.value} d={self.d}"


def packed_length(shape):
    """パック列の長さ"""
    kind, d = shape.kind, shape.d
    if kind is Kind.SPIN:
        return shape.n + 1
    if kind is Kind.RSM:
        return d * (d + 1) // 2
    if kind is Kind.CHM:
        return d * d
    m = kind.entry_length
    return d + m * d * (d - 1) // 2


@dataclass(frozen=True)
class _Layout:
    rows: np.ndarray
    cols: np.ndarray
    comps: np.ndarray
    labels: tuple
    gather: np.ndarray
    gather_sign: np.ndarray
    packed_at: np.ndarray
    mirror: np.ndarray
    mirror_sign: np.ndarray


@lru_cache(maxsize=None)
def _matrix_layout(kind, d):
    """各パック座標が指す (行, 列, 係数) の表と、密行列との変換用の添字"""
    m = kind.entry_length
    entries = []
    if kind is Kind.RSM:
        for j in range(d):
            for i in range(j, d):
                entries.append((i, j, 0))
    else:
        for i in range(d):
            entries.append((i, i, 0))
        for j in range(d):
            for i in range(j + 1, d):
                for c in range(m):
                    entries.append((i, j, c))

    if kind is Kind.ALBERT:
        basis = BASIS_LABELS[8]
        labels = tuple(f"d{i + 1}" for i in range(3)) + tuple(
            f"{b}(o{k})" for k in range(1, 4) for b in basis)
    else:
        labels = tuple(f"[{k + 1},]" for k in range(len(entries)))

    arr = np.array(entries, dtype=np.intp).reshape(-1, 3)
    rows, cols, comps = arr[:, 0], arr[:, 1], arr[:, 2]

    # 密行列の各成分 (i, j, c) はパック座標 gather に符号 gather_sign を掛けたもの
    # （対角の虚部は末尾に足した 0 を指す）
    size = len(entries)
    gather = np.full(d * d * m, size, dtype=np.intp)
    gather_sign = np.ones(d * d * m)
    flat = (rows * d + cols) * m + comps
    flat_t = (cols * d + rows) * m + comps
    conj = np.where(comps == 0, 1.0, -1.0)
    off = rows != cols
    gather[flat_t[off]] = np.arange(size)[off]
    gather_sign[flat_t[off]] = conj[off]
    gather[flat] = np.arange(size)

    for a in (rows, cols, comps, gather, gather_sign, flat, flat_t, conj):
        a.flags.writeable = False
    return _Layout(rows, cols, comps, labels, gather, gather_sign, flat, flat_t, conj)


def row_labels(shape):
    """表示用の行ラベル"""
    if shape.kind is Kind.SPIN:
        return ('r',) + tuple(f"[{i + 1}]" for i in range(shape.n))
    return _matrix_layout(shape.kind, shape.d).labels


class DenseMatrix:
    """d×d の合成代数成分行列（entries は (d, d, m) 配列）"""

    __slots__ = ('_entries',)
    __array_ufunc__ = None

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.float64)
        if arr.ndim == 2:
            arr = arr[:, :, np.newaxis]
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1]:
            raise ShapeError(f"正方行列ではありません: {arr.shape}")
        if arr.shape[2] not in BASIS_LABELS:
            raise ShapeError(f"成分の係数の数が不正です: {arr.shape[2]}")
        arr.flags.writeable = False
        self._entries = arr

    @classmethod
    def from_complex(cls, matrix):
        """numpy の複素行列から作る"""
        matrix = np.asarray(matrix, dtype=np.complex128)
        return cls(np.stack([matrix.real, matrix.imag], axis=-1))

    @property
    def entries(self):
        return self._entries

    @property
    def d(self):
        return self._entries.shape[0]

    @property
    def entry_length(self):
        return self._entries.shape[2]

    def entry(self, i, j):
        return CompositionNumber(self._entries[i, j])

    def conjugate_transpose(self):
        return DenseMatrix(conjugate_array(self._entries.transpose(1, 0, 2)))

    def hermitian_defect(self):
        """max |M - Mᴴ|（対角の虚部も含む）"""
        return (self - self.conjugate_transpose()).max_abs()

    def max_abs(self):
        return float(np.max(np.abs(self._entries), initial=0.0))

    def _coerce(self, other):
        if not isinstance(other, DenseMatrix):
            return None
        if other._entries.shape != self._entries.shape:
            raise ShapeError(f"行列の形状が一致しません: {self._entries.shape} と {other._entries.shape}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return DenseMatrix(self._entries + other._entries)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return DenseMatrix(self._entries - other._entries)

    def __mul__(self, alpha):
        if isinstance(alpha, numbers.Real):
            return DenseMatrix(float(alpha) * self._entries)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return bool(np.array_equal(self._entries, other._entries))

    __hash__ = None

    def to_frame(self):
        """表示用の DataFrame（実行列は格子、それ以外は係数×成分の表）"""
        d, m = self.d, self.entry_length
        if m == 1:
            return pd.DataFrame(self._entries[:, :, 0],
                                index=[f"[{i + 1},]" for i in range(d)],
                                columns=[f"[,{j + 1}]" for j in range(d)])
        columns, data = [], []
        for j in range(d):
            for i in range(d):
                columns.append(f"[{i + 1},{j + 1}]")
                data.append(self._entries[i, j])
        return pd.DataFrame(np.array(data).T, index=list(BASIS_LABELS[m]), columns=columns)

    def __str__(self):
        return self.to_frame().to_string()

    def __repr__(self):
        return f"DenseMatrix(d={self.d}, entry_length={self.entry_length})"


def _as_real(value):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"実数が必要です: {value!r}")
    return float(value)


def _check_shapes(x, y):
    if x.shape != y.shape:
        raise ShapeError(f"代数の形状が一致しません: {x.shape.label()} と {y.shape.label()}",
                         expected=x.shape, actual=y.shape)


def _as_block(x):
    if isinstance(x, JordanVector):
        return x.block
    return x.coords[:, np.newaxis]


def aligned_blocks(x, y):
    """元・ベクトルのブロック (P, 列数) の組。1列の側はもう一方の列数に広がる"""
    _check_shapes(x, y)
    left, right = _as_block(x), _as_block(y)
    cl, cr = left.shape[1], right.shape[1]
    if cl != cr and cl != 1 and cr != 1:
        raise ShapeError(f"列数が一致しません: {cl} と {cr}", expected=cl, actual=cr)
    return left, right


class JordanElement:
    """ジョルダン代数の1元（パック列）"""

    __slots__ = ('_shape', '_coords')
    __array_ufunc__ = None

    def __init__(self, shape, coords):
        arr = np.array(coords, dtype=np.float64).reshape(-1)
        expected = shape.packed_length
        if arr.size != expected:
            raise ShapeError(f"パック列の長さが不正です: {arr.size}（期待値 {expected}）",
                             expected=expected, actual=arr.size)
        arr.flags.writeable = False
        self._shape = shape
        self._coords = arr

    @property
    def shape(self):
        return self._shape

    @property
    def kind(self):
        return self._shape.kind

    @property
    def coords(self):
        return self._coords

    def max_abs(self):
        return float(np.max(np.abs(self._coords), initial=0.0))

    def to_dense(self):
        return to_dense(self)

    def __add__(self, other):
        if isinstance(other, JordanElement):
            return add(self, other)
        if isinstance(other, numbers.Real):
            return scalar_add(self, other)
        return NotImplemented

    def __radd__(self, other):
        if isinstance(other, numbers.Real):
            return scalar_add(self, other)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, JordanElement):
            return subtract(self, other)
        if isinstance(other, numbers.Real):
            return scalar_add(self, -float(other))
        return NotImplemented

    def __neg__(self):
        return negate(self)

    def __mul__(self, other):
        if isinstance(other, JordanElement):
            from jordan_product import jordan_product
            return jordan_product(self, other)
        if isinstance(other, numbers.Real):
            return scalar_multiply(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return scalar_multiply(other, self)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            return scalar_multiply(1.0 / float(other), self)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, JordanElement):
            return NotImplemented
        return self._shape == other._shape and bool(np.array_equal(self._coords, other._coords))

    __hash__ = None

    def __repr__(self):
        return format_vector(JordanVector(self._shape, self._coords[:, np.newaxis]))


class JordanVector:
    """同じ形状の元を列に並べたもの（block は (packed_length, 列数)）"""

    __slots__ = ('_shape', '_block')
    __array_ufunc__ = None

    def __init__(self, shape, block):
        arr = np.array(block, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, np.newaxis]
        if arr.ndim != 2 or arr.shape[0] != shape.packed_length:
            raise ShapeError(f"ブロックの行数が不正です: {arr.shape}（期待値 {shape.packed_length} 行）",
                             expected=shape.packed_length, actual=arr.shape[0] if arr.ndim == 2 else None)
        if arr.shape[1] < 1:
            raise ShapeError("列が1つもありません")
        arr.flags.writeable = False
        self._shape = shape
        self._block = arr

    @classmethod
    def from_columns(cls, columns):
        columns = list(columns)
        if not columns:
            raise ShapeError("列が1つもありません")
        shape = columns[0].shape
        for column in columns[1:]:
            _check_shapes(columns[0], column)
        return cls(shape, np.column_stack([c.coords for c in columns]))

    @property
    def shape(self):
        return self._shape

    @property
    def block(self):
        return self._block

    @property
    def n_columns(self):
        return self._block.shape[1]

    @property
    def columns(self):
        return [JordanElement(self._shape, self._block[:, j]) for j in range(self.n_columns)]

    def __len__(self):
        return self.n_columns

    def __iter__(self):
        return iter(self.columns)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return JordanVector(self._shape, self._block[:, index])
        return JordanElement(self._shape, self._block[:, index])

    def max_abs(self):
        return float(np.max(np.abs(self._block), initial=0.0))

    def column_max_abs(self):
        """列ごとの座標の最大絶対値"""
        return np.max(np.abs(self._block), axis=0)

    def __add__(self, other):
        if isinstance(other, (JordanVector, JordanElement)):
            left, right = aligned_blocks(self, other)
            return JordanVector(self._shape, left + right)
        if isinstance(other, numbers.Real):
            return JordanVector(self._shape, self._block + _as_real(other))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (JordanVector, JordanElement)):
            left, right = aligned_blocks(self, other)
            return JordanVector(self._shape, left - right)
        if isinstance(other, numbers.Real):
            return JordanVector(self._shape, self._block + (-_as_real(other)))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, JordanElement):
            left, right = aligned_blocks(other, self)
            return JordanVector(self._shape, left - right)
        return NotImplemented

    def __neg__(self):
        return JordanVector(self._shape, -self._block)

    def __mul__(self, other):
        if isinstance(other, (JordanVector, JordanElement)):
            from jordan_product import jordan_product
            return jordan_product(self, other)
        if isinstance(other, numbers.Real):
            return JordanVector(self._shape, _as_real(other) * self._block)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Real):
            return JordanVector(self._shape, self._block / _as_real(other))
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, JordanVector):
            return NotImplemented
        return self._shape == other._shape and bool(np.array_equal(self._block, other._block))

    __hash__ = None

    def to_frame(self):
        return pd.DataFrame(self._block, index=list(row_labels(self._shape)),
                            columns=[f"[{j + 1}]" for j in range(self.n_columns)])

    def __str__(self):
        return format_vector(self)

    def __repr__(self):
        return format_vector(self)


def format_vector(v, round_display=False, max_rows=DISPLAY_MAX_ROWS):
    """ベクトルの表形式表示（行が多いときは先頭5行と末尾5行のみ）"""
    frame = v.to_frame()
    truncated = len(frame) > max_rows
    if truncated:
        half = max_rows // 2
        frame = pd.concat([frame.iloc[:half], frame.iloc[-half:]])
    float_format = (lambda value: f"{value:.2f}") if round_display else None
    lines = frame.to_string(float_format=float_format).split('\n')
    if truncated:
        lines.insert(1 + max_rows // 2, '.' * len(lines[0]))
    header = f"Vector of {v.shape.kind.description} with entries"
    return '\n'.join([header] + lines)


# ---- 線形演算 ----

def add(x, y):
    _check_shapes(x, y)
    return JordanElement(x.shape, x.coords + y.coords)


def subtract(x, y):
    _check_shapes(x, y)
    return JordanElement(x.shape, x.coords - y.coords)


def negate(x):
    return JordanElement(x.shape, -x.coords)


def scalar_multiply(alpha, x):
    """全パック座標を α 倍する"""
    return JordanElement(x.shape, _as_real(alpha) * x.coords)


def scalar_add(x, alpha):
    """全パック座標に α を足す（対角だけではない）"""
    return JordanElement(x.shape, x.coords + _as_real(alpha))


def add_unit(x, alpha):
    """x + α·e（単位元の α 倍を足す）"""
    return add(x, scalar_multiply(alpha, unit_element(x.shape)))


def equal_approx(x, y, tol):
    """座標差の最大絶対値が tol 以下か"""
    _check_shapes(x, y)
    return float(np.max(np.abs(x.coords - y.coords), initial=0.0)) <= tol


def zero_element(shape):
    return JordanElement(shape, np.zeros(shape.packed_length))


def unit_element(shape):
    """ジョルダン単位元（行列型は単位行列、spin は (1, 0)）"""
    coords = np.zeros(shape.packed_length)
    if shape.kind is Kind.SPIN:
        coords[0] = 1.0
    else:
        layout = _matrix_layout(shape.kind, shape.d)
        coords[(layout.rows == layout.cols) & (layout.comps == 0)] = 1.0
    return JordanElement(shape, coords)


# ---- 密行列との変換 ----

def _require_matrix_kind(shape):
    if not shape.kind.is_matrix:
        raise UnsupportedKindError(f"{shape.kind.value} は行列型ではありません")


def dense_block(shape, coords):
    """パック座標 (..., P) から (..., d, d, m) のエルミート配列を作る"""
    _require_matrix_kind(shape)
    layout = _matrix_layout(shape.kind, shape.d)
    coords = np.asarray(coords, dtype=np.float64)
    padded = np.concatenate([coords, np.zeros(coords.shape[:-1] + (1,))], axis=-1)
    flat = padded[..., layout.gather] * layout.gather_sign
    return flat.reshape(coords.shape[:-1] + (shape.d, shape.d, shape.kind.entry_length))


def pack_block(shape, entries):
    """(..., d, d, m) を (M + Mᴴ)/2 にしてからパック座標 (..., P) にする"""
    layout = _matrix_layout(shape.kind, shape.d)
    entries = np.asarray(entries, dtype=np.float64)
    flat = entries.reshape(entries.shape[:-3] + (-1,))
    return 0.5 * (flat[..., layout.packed_at] + layout.mirror_sign * flat[..., layout.mirror])


def dense_entries(x):
    """パック列から (d, d, m) のエルミート配列を作る"""
    return dense_block(x.shape, x.coords)


def to_dense(x):
    """as.1matrix 相当：エルミート行列に戻す"""
    return DenseMatrix(dense_entries(x))


def pack_hermitian(entries, shape):
    """(M + Mᴴ)/2 にしてからパックする（検証なし、内部用）"""
    return JordanElement(shape, pack_block(shape, entries))


def _shape_for_dense(matrix, kind):
    if isinstance(kind, AlgebraShape):
        shape = kind
    else:
        if kind is None:
            kind = _KIND_BY_ENTRY_LENGTH.get(matrix.entry_length, Kind.OHERM)
        kind = Kind.parse(kind)
        if not kind.is_matrix:
            raise UnsupportedKindError(f"{kind.value} は行列型ではありません")
        shape = AlgebraShape(kind, d=matrix.d)
    _require_matrix_kind(shape)
    if shape.d != matrix.d:
        raise ShapeError(f"行列の次元が一致しません: {matrix.d}（期待値 {shape.d}）",
                         expected=shape.d, actual=matrix.d)
    if shape.kind.entry_length != matrix.entry_length:
        raise ShapeError(f"成分の係数の数が一致しません: {matrix.entry_length}（期待値 {shape.kind.entry_length}）",
                         expected=shape.kind.entry_length, actual=matrix.entry_length)
    return shape


def from_dense(matrix, kind=None, tol=HERMITIAN_TOLERANCE):
    """エルミート行列をパック列に変換する（許容誤差を超える非エルミートは検証エラー）"""
    if not isinstance(matrix, DenseMatrix):
        matrix = DenseMatrix(matrix)
    shape = _shape_for_dense(matrix, kind)
    entries = matrix.entries
    if not np.all(np.isfinite(entries)):
        raise ValidationError("行列に非有限値が含まれています")
    diag = entries[np.arange(matrix.d), np.arange(matrix.d), 1:]
    diag_imag = float(np.max(np.abs(diag), initial=0.0))
    if diag_imag > tol:
        raise ValidationError(f"対角成分の虚部が許容誤差を超えています: {diag_imag:.3e}")
    defect = matrix.hermitian_defect()
    if defect > tol:
        raise ValidationError(f"行列がエルミートではありません（最大差 {defect:.3e}、許容 {tol:.1e}）")
    return pack_hermitian(entries, shape)
