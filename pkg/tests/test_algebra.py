import json
import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spinor_factor import algebra as A

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
octs = arrays(np.float64, 8, elements=finite)
quats = arrays(np.float64, 4, elements=finite)


def test_multiplication_table_matches_frozen_table(data_dir):
    with open(os.path.join(data_dir, "octonion_table.json")) as fh:
        table = np.array(json.load(fh)["table"])
    e = np.eye(8)
    got = np.array([[A.omul(e[i], e[j]) for j in range(8)] for i in range(8)])
    assert np.array_equal(got, table)


def test_e1_e2_is_e3():
    e = np.eye(8)
    assert np.array_equal(A.omul(e[1], e[2]), e[3])


def test_imaginary_units_square_to_minus_one():
    e = np.eye(8)
    for k in range(1, 8):
        assert np.array_equal(A.omul(e[k], e[k]), -e[0])


def test_not_associative():
    e = np.eye(8)
    lhs = A.omul(A.omul(e[1], e[2]), e[4])
    rhs = A.omul(e[1], A.omul(e[2], e[4]))
    assert np.linalg.norm(lhs - rhs) == pytest.approx(2.0)


@given(octs, octs)
def test_norm_is_multiplicative(a, b):
    assert A.norm(A.omul(a, b)) == pytest.approx(A.norm(a) * A.norm(b), rel=1e-12, abs=1e-12)


@given(octs, octs)
def test_alternative_laws(a, b):
    scale = 1 + A.norm(a) ** 2 * A.norm(b)
    assert np.abs(A.omul(A.omul(a, a), b) - A.omul(a, A.omul(a, b))).max() <= 1e-12 * scale
    scale = 1 + A.norm(b) ** 2 * A.norm(a)
    assert np.abs(A.omul(A.omul(a, b), b) - A.omul(a, A.omul(b, b))).max() <= 1e-12 * scale


@given(octs, octs, octs)
def test_moufang_identity(a, b, c):
    # a(b(ac)) = ((ab)a)c
    lhs = A.omul(a, A.omul(b, A.omul(a, c)))
    rhs = A.omul(A.omul(A.omul(a, b), a), c)
    scale = 1 + A.norm(a) ** 2 * A.norm(b) * A.norm(c)
    assert np.abs(lhs - rhs).max() <= 1e-12 * scale


@given(octs, octs)
def test_conjugation_reverses_products(a, b):
    lhs = A.oconj(A.omul(a, b))
    rhs = A.omul(A.oconj(b), A.oconj(a))
    assert np.allclose(lhs, rhs, atol=1e-12 * (1 + A.norm(a) * A.norm(b)))


def test_complexified_products_are_bilinear(rng):
    p, q, r, s = rng.standard_normal((4, 8))
    x, y = p + 1j * q, r + 1j * s
    expected = A.omul(p, r) - A.omul(q, s) + 1j * (A.omul(p, s) + A.omul(q, r))
    assert np.allclose(A.omul(x, y), expected, atol=1e-13)


def test_inner_product_polarises_the_norm(rng):
    a, b = rng.standard_normal((2, 8))
    half = 0.5 * (A.omul(a, A.oconj(b)) + A.omul(b, A.oconj(a)))
    assert A.inner(a, b) == pytest.approx(half[0])
    assert np.allclose(half[1:], 0, atol=1e-13)


def test_orthogonal_direction_is_unit_and_orthogonal(rng):
    x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    d = A.orthogonal_direction(x)
    assert np.linalg.norm(d) == pytest.approx(1.0)
    assert abs(d @ x.real) < 1e-12 and abs(d @ x.imag) < 1e-12


def test_orthogonal_direction_of_zero_is_a_basis_vector():
    d = A.orthogonal_direction(np.zeros(8))
    assert np.array_equal(d, np.eye(8)[0])


@given(quats)
def test_quaternion_polar_form_reconstructs(q):
    r, u, theta = A.quat_polar(q)
    assert np.allclose(r * A.quat_exp(u, theta), q, atol=1e-12 * (1 + np.linalg.norm(q)))
    assert 0 <= theta <= np.pi


def test_quaternion_inverse(rng):
    q = rng.standard_normal(4)
    assert np.allclose(A.qmul(q, A.quat_inv(q)), [1, 0, 0, 0])


def test_value_classes_wrap_the_arrays():
    a = A.Octonion(1, 2, 0, 0, 0, 0, 0, 3)
    b = A.Octonion(0, 1, 1, 0, 0, 0, 0, 0)
    assert np.allclose((a * b).array, A.omul(a.array, b.array))
    assert abs(a) == pytest.approx(np.sqrt(14))
    q = A.Quaternion(0, 1, 0, 0) * A.Quaternion(0, 0, 1, 0)
    assert np.allclose(q.array, [0, 0, 0, 1])
