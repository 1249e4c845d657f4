"""
ジョルダン積 x∘y

行列型: (M_x M_y + M_y M_x)/2 を密行列で計算してからパックし直す。
spin:   (ab + ⟨𝐚,𝐛⟩_w, a𝐛 + b𝐚)、⟨𝐚,𝐛⟩_w = Σ w_i a_i b_i。

JordanVector 同士の積は列をまとめて一度に計算する。列ごとの値は
1列ずつ計算した場合とビット単位で一致する（和の順序が列数によらない）。

dense_oracle_check は成分ごとに別経路（Python の complex、ハミルトン積、
CompositionNumber）で三重ループの行列積を取り、パック版と突き合わせる。
"""

import logging

import numpy as np

from composition_algebras import CompositionNumber, cd_multiply, conjugate_array, table_product_array
from jordan_elements import (DenseMatrix, JordanElement, JordanVector, Kind, _check_shapes,
                             _require_matrix_kind, aligned_blocks, dense_block, dense_entries, pack_block,
                             pack_hermitian, to_dense)
from residual_report import ResidualReport

logger = logging.getLogger(__name__)


def dense_matmul(a, b):
    """(..., d, d, m) 配列同士の行列積。k の和は 0 から順に足す"""
    terms = table_product_array(a[..., :, :, np.newaxis, :], b[..., np.newaxis, :, :, :])
    acc = terms[..., :, 0, :, :]
    for k in range(1, terms.shape[-3]):
        acc = acc + terms[..., :, k, :, :]
    return acc


def dense_jordan(a, b):
    """(AB + BA)/2"""
    return 0.5 * (dense_matmul(a, b) + dense_matmul(b, a))


def _spin_coords(shape, xs, ys):
    a, va = xs[..., 0], xs[..., 1:]
    b, vb = ys[..., 0], ys[..., 1:]
    weights = shape.weights_array
    inner = weights[0] * (va[..., 0] * vb[..., 0])
    for i in range(1, shape.n):
        inner = inner + weights[i] * (va[..., i] * vb[..., i])
    scalar = a * b + inner
    vector = a[..., np.newaxis] * vb + b[..., np.newaxis] * va
    return np.concatenate([scalar[..., np.newaxis], vector], axis=-1)


def product_coords(shape, xs, ys):
    """パック座標 (..., P) 同士のジョルダン積"""
    if shape.kind is Kind.SPIN:
        return _spin_coords(shape, xs, ys)
    return pack_block(shape, dense_jordan(dense_block(shape, xs), dense_block(shape, ys)))


def jordan_product(x, y):
    """ジョルダン積 x∘y（JordanVector なら列ごと）"""
    _check_shapes(x, y)
    if isinstance(x, JordanVector) or isinstance(y, JordanVector):
        left, right = aligned_blocks(x, y)
        left, right = np.broadcast_arrays(left.T, right.T)
        return JordanVector(x.shape, product_coords(x.shape, left, right).T)
    return JordanElement(x.shape, product_coords(x.shape, x.coords, y.coords))


def symmetry_preservation_check(x, y):
    """パック前の (M_x M_y + M_y M_x)/2 のエルミート性の崩れ"""
    _check_shapes(x, y)
    _require_matrix_kind(x.shape)
    product = dense_jordan(dense_entries(x), dense_entries(y))
    residual = float(np.max(np.abs(product - conjugate_array(product.transpose(1, 0, 2))), initial=0.0))
    return ResidualReport.single(x.shape, 'symmetry', residual)


# ---- 独立した素朴な密行列演算（オラクル） ----

def _real_product(a, b):
    return (a[0] * b[0],)


def _complex_product(a, b):
    z = complex(a[0], a[1]) * complex(b[0], b[1])
    return (z.real, z.imag)


def _hamilton_product(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def _octonion_product(a, b):
    return tuple(cd_multiply(CompositionNumber(a), CompositionNumber(b)).coeffs.tolist())


_ENTRY_PRODUCTS = {1: _real_product, 2: _complex_product, 4: _hamilton_product, 8: _octonion_product}


def naive_matmul(a, b):
    """三重ループによる行列積（DenseMatrix 同士）"""
    d, m = a.d, a.entry_length
    multiply = _ENTRY_PRODUCTS[m]
    ea, eb = a.entries.tolist(), b.entries.tolist()
    result = np.zeros((d, d, m))
    for i in range(d):
        for j in range(d):
            acc = [0.0] * m
            for k in range(d):
                term = multiply(ea[i][k], eb[k][j])
                acc = [s + t for s, t in zip(acc, term)]
            result[i, j] = acc
    return DenseMatrix(result)


def naive_jordan_oracle(mx, my):
    """(M_x M_y + M_y M_x)/2 を素朴な積で計算する"""
    return 0.5 * (naive_matmul(mx, my) + naive_matmul(my, mx))


def dense_oracle_check(x, y):
    """パック版の積と素朴な密行列版の積の差"""
    _check_shapes(x, y)
    _require_matrix_kind(x.shape)
    packed = jordan_product(x, y)
    oracle = pack_hermitian(naive_jordan_oracle(to_dense(x), to_dense(y)).entries, x.shape)
    residual = float(np.max(np.abs(packed.coords - oracle.coords), initial=0.0))
    logger.debug(f"Dense oracle residual for {x.shape.label()}: {residual:.3e}")
    return ResidualReport.single(x.shape, 'dense_oracle', residual)
