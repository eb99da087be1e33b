import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinor_factor import jordan as J
from spinor_factor.algebra import omul, oconj

seeds = st.integers(0, 2 ** 32 - 1)


def random_element(seed, complex_=False):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal(27)
    if complex_:
        X = X + 1j * rng.standard_normal(27)
    return X


def cross_via_jordan_product(X, Y):
    """Cross product from the matrix-model Jordan product:
    ``X x Y = (2 X o Y - tr(X) Y - tr(Y) X + (tr X tr Y - (X, Y)) E) / 2``."""
    t = J.trace
    return 0.5 * (2 * J.jordan_product(X, Y) - t(X) * Y - t(Y) * X
                  + (t(X) * t(Y) - J.bilinear(X, Y)) * J.IDENTITY_ELEMENT)


def test_layout_round_trips():
    xi = [1.0, 2.0, 3.0]
    x = np.arange(24.0).reshape(3, 8)
    X = J.element(xi, x)
    a, b = J.split(X)
    assert np.array_equal(a, xi) and np.array_equal(b, x)
    assert np.array_equal(J.join(a, b), X)


def test_matrix_model_places_the_octonions():
    x = np.eye(8)[[1, 2, 3]]
    m = J.to_matrix(J.element([1, 2, 3], x))
    assert np.array_equal(m[1, 2], x[0]) and np.array_equal(m[2, 1], oconj(x[0]))
    assert np.array_equal(m[2, 0], x[1]) and np.array_equal(m[0, 2], oconj(x[1]))
    assert np.array_equal(m[0, 1], x[2]) and np.array_equal(m[1, 0], oconj(x[2]))
    assert np.array_equal(J.from_matrix(m), J.element([1, 2, 3], x))


@given(seeds)
def test_cross_matches_jordan_product_identity(seed):
    X, Y = random_element(seed), random_element(seed + 1)
    assert np.abs(J.cross(X, Y) - cross_via_jordan_product(X, Y)).max() < 1e-12 * (
        1 + J.norm(X) * J.norm(Y))


@given(seeds)
def test_trace_form_is_the_bilinear_form(seed):
    X, Y = random_element(seed), random_element(seed + 7)
    assert J.trace(J.jordan_product(X, Y)) == pytest.approx(J.bilinear(X, Y), rel=1e-12)


def test_sharp_offdiagonal_uses_conjugated_product(rng):
    x = rng.standard_normal((3, 8))
    X = J.element([0, 0, 0], x)
    assert np.allclose(J.sharp(X)[3:11], oconj(omul(x[1], x[2])))


def test_idempotents_are_rank_one():
    for k in (1, 2, 3):
        assert J.is_rank_one(J.E(k))[0]
    assert not J.is_rank_one(J.IDENTITY_ELEMENT)[0]


def test_hermitian_form_is_positive(rng):
    X = random_element(3, complex_=True)
    assert J.hermitian(X, X).real > 0
    assert abs(J.hermitian(X, X).imag) < 1e-12


def test_shift_moves_slot_k_to_k_plus_one():
    X = J.element([1, 2, 3], np.arange(24.0).reshape(3, 8))
    S = J.shift(X)
    a, x = J.split(S)
    assert np.array_equal(a, [3, 1, 2])
    assert np.array_equal(x[1], np.arange(8.0))
    assert np.array_equal(J.shift(J.E(1)), J.E(2))


def test_shift_is_an_automorphism_of_the_cross_product(rng):
    X, Y = random_element(5), random_element(6)
    assert np.allclose(J.shift(J.cross(X, Y)), J.cross(J.shift(X), J.shift(Y)), atol=1e-12)


def test_shift_matrix_matches_function(rng):
    X = random_element(8)
    assert np.array_equal(J.shift_matrix(2) @ X, J.shift(X, 2))
    assert np.array_equal(J.shift(J.shift(X, 1), -1), X)
