#!/usr/bin/env python3
"""
ジョルダン積・密行列オラクル・エルミート性の保存のテスト
"""

import sys

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from jordan_elements import AlgebraShape, JordanElement, JordanVector, from_dense, to_dense, unit_element
from jordan_errors import ShapeError, UnsupportedKindError
from jordan_product import (dense_oracle_check, jordan_product, naive_jordan_oracle,
                            symmetry_preservation_check)
from random_gen import rrsm, trial_operands

MATRIX_SHAPES = (AlgebraShape.rsm(5), AlgebraShape.chm(5), AlgebraShape.qhm(5),
                 AlgebraShape.albert(), AlgebraShape.oherm(4))


def _pairs(shape, count, seed=0):
    for trial in range(count):
        x, y, _ = trial_operands(shape, seed, trial)
        yield x, y


def test_rsm_product_matches_numpy():
    """rsm では (XY + YX)/2 の通常の行列積と一致"""
    x, y = rrsm(n=2, seed=4).columns
    mx, my = to_dense(x).entries[:, :, 0], to_dense(y).entries[:, :, 0]
    expected = 0.5 * (mx @ my + my @ mx)
    got = to_dense(x * y).entries[:, :, 0]
    assert np.max(np.abs(got - expected)) <= 1e-13


def test_chm_product_matches_numpy_complex():
    shape = AlgebraShape.chm(4)
    x, y = next(_pairs(shape, 1, seed=9))
    mx, my = (to_dense(v).entries for v in (x, y))
    cx = mx[:, :, 0] + 1j * mx[:, :, 1]
    cy = my[:, :, 0] + 1j * my[:, :, 1]
    expected = 0.5 * (cx @ cy + cy @ cx)
    got = to_dense(x * y).entries
    assert np.max(np.abs(got[:, :, 0] - expected.real)) <= 1e-13
    assert np.max(np.abs(got[:, :, 1] - expected.imag)) <= 1e-13


def test_product_commutes_exactly():
    for shape in MATRIX_SHAPES + (AlgebraShape.spin(5),):
        for x, y in _pairs(shape, 5):
            assert jordan_product(x, y) == jordan_product(y, x)


def test_dense_oracle_equivalence():
    """パック版の積と素朴な三重ループ版の積：500 組で rsm は完全一致、他は 1e-13 以内"""
    for x, y in _pairs(AlgebraShape.rsm(5), 500):
        assert dense_oracle_check(x, y).max_abs == 0.0
    for shape in (AlgebraShape.chm(5), AlgebraShape.qhm(5), AlgebraShape.albert()):
        worst = max(dense_oracle_check(x, y).max_abs for x, y in _pairs(shape, 500))
        assert worst <= 1e-13, f"{shape.label()}: {worst}"


def test_naive_oracle_is_hermitian_on_octonions():
    for x, y in _pairs(AlgebraShape.albert(), 5, seed=2):
        assert naive_jordan_oracle(to_dense(x), to_dense(y)).hermitian_defect() <= 1e-13


def test_symmetry_preservation():
    """積 (XY + YX)/2 はパック前からエルミート（rsm は完全に対称）"""
    for x, y in _pairs(AlgebraShape.rsm(5), 50):
        assert symmetry_preservation_check(x, y).max_abs == 0.0
    for shape in (AlgebraShape.chm(5), AlgebraShape.qhm(5), AlgebraShape.albert()):
        for x, y in _pairs(shape, 20):
            assert symmetry_preservation_check(x, y).max_abs <= 1e-13
    for x in _pairs(AlgebraShape.albert(), 5):
        assert symmetry_preservation_check(x[0], x[0]).max_abs <= 1e-13


def test_symmetry_check_rejects_spin():
    x, y = next(_pairs(AlgebraShape.spin(5), 1))
    try:
        symmetry_preservation_check(x, y)
    except UnsupportedKindError:
        pass
    else:
        raise AssertionError("spin のエルミート性検査が受理されました")


def test_unit_is_identity_for_product():
    for shape in MATRIX_SHAPES + (AlgebraShape.spin(4),):
        x, _ = next(_pairs(shape, 1, seed=5))
        e = unit_element(shape)
        assert np.max(np.abs((e * x).coords - x.coords)) <= 1e-15


def test_spin_product_formula():
    """(a, 𝐚)(b, 𝐛) = (ab + ⟨𝐚,𝐛⟩_w, a𝐛 + b𝐚)"""
    shape = AlgebraShape.spin(2, ip_weights=(1.0, 2.0))
    x = JordanElement(shape, [1.0, 2.0, 3.0])
    y = JordanElement(shape, [4.0, 5.0, 6.0])
    assert (x * y).coords.tolist() == [4.0 + 10.0 + 36.0, 1.0 * 5.0 + 4.0 * 2.0, 1.0 * 6.0 + 4.0 * 3.0]


def test_spin_vector_square_is_scalar():
    """純ベクトルの2乗はスカラー（クリフォード関係）"""
    shape = AlgebraShape.spin(3)
    v = JordanElement(shape, [0.0, 1.0, 2.0, 2.0])
    assert (v * v).coords.tolist() == [9.0, 0.0, 0.0, 0.0]


def test_known_rsm_product():
    shape = AlgebraShape.rsm(2)
    x = from_dense(np.array([[1.0, 2.0], [2.0, 3.0]]), shape)
    y = from_dense(np.array([[0.0, 1.0], [1.0, 0.0]]), shape)
    # (XY + YX)/2 = [[2, 2], [2, 2]]
    assert (x * y).coords.tolist() == [2.0, 2.0, 2.0]


def test_shape_mismatch():
    x = unit_element(AlgebraShape.rsm(3))
    y = unit_element(AlgebraShape.rsm(4))
    try:
        jordan_product(x, y)
    except ShapeError:
        pass
    else:
        raise AssertionError("次元の違う積が受理されました")


def test_vector_product_is_columnwise():
    v = rrsm(n=3, seed=1)
    w = rrsm(n=3, seed=2)
    product = v * w
    assert isinstance(product, JordanVector)
    for j in range(3):
        assert product[j] == v[j] * w[j]
    single = v * w[0]
    assert single[2] == v[2] * w[0]
    for shape in MATRIX_SHAPES + (AlgebraShape.spin(5, ip_weights=(1.0, 0.5, 2.0, 1.0, 3.0)),):
        pairs = list(_pairs(shape, 6, seed=3))
        xv = JordanVector.from_columns(x for x, _ in pairs)
        yv = JordanVector.from_columns(y for _, y in pairs)
        batched = xv * yv
        for j, (x, y) in enumerate(pairs):
            assert batched[j] == x * y, shape.label()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=-100, max_value=100, allow_nan=False), min_size=6, max_size=6),
       st.lists(st.floats(min_value=-100, max_value=100, allow_nan=False), min_size=6, max_size=6))
def test_spin_commutes_for_any_input(a, b):
    shape = AlgebraShape.spin(5)
    x, y = JordanElement(shape, a), JordanElement(shape, b)
    assert x * y == y * x


def run_all_tests():
    """全テストを実行"""
    print("*** ジョルダン積 - テスト開始 ***")
    print("=" * 50)

    tests = [
        ("rsm と numpy の一致", test_rsm_product_matches_numpy),
        ("chm と複素行列の一致", test_chm_product_matches_numpy_complex),
        ("可換性", test_product_commutes_exactly),
        ("密行列オラクル", test_dense_oracle_equivalence),
        ("八元数オラクルのエルミート性", test_naive_oracle_is_hermitian_on_octonions),
        ("エルミート性の保存", test_symmetry_preservation),
        ("spin のエルミート性検査", test_symmetry_check_rejects_spin),
        ("単位元", test_unit_is_identity_for_product),
        ("spin の積", test_spin_product_formula),
        ("spin のベクトルの2乗", test_spin_vector_square_is_scalar),
        ("rsm の具体例", test_known_rsm_product),
        ("次元の不一致", test_shape_mismatch),
        ("列ごとの積", test_vector_product_is_columnwise),
        ("spin の可換性", test_spin_commutes_for_any_input),
    ]

    passed = 0
    for test_name, test_func in tests:
        try:
            test_func()
            print(f"✅ PASS {test_name}")
            passed += 1
        except Exception as e:
            print(f"❌ FAIL {test_name}: {e}")

    print(f"\n🏆 成功: {passed}/{len(tests)}")
    return passed == len(tests)


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
