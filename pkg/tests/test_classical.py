import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinor_factor import classical as C

seeds = st.integers(0, 2 ** 32 - 1)


def check(A, ring, tol=1e-12):
    triple = C.decompose_classical(A, ring)
    rep = C.verify_factors(A, triple)
    assert rep["reconstruction"] <= 1e-10
    assert max(rep["A1_fixes_e1"], rep["A2_fixes_e2"], rep["A1p_fixes_e1"]) <= tol
    assert rep["membership"] <= tol
    return triple


@pytest.mark.parametrize("group", ["so3", "su3", "sp3"])
@given(seed=seeds)
def test_random_elements_factor(group, seed):
    A = C.sample(group, np.random.default_rng(seed))
    check(A, C.GROUP_RING[group])


@pytest.mark.parametrize("group", ["so3", "su3", "sp3"])
def test_samples_are_group_members(group, rng):
    A = C.sample(group, rng)
    assert C.membership_residual(A, C.GROUP_RING[group]) < 1e-13


def test_identity_gives_identity_factors():
    t = check(np.eye(3), "real")
    for M in (t.A1, t.A2, t.A1p):
        assert np.allclose(M, np.eye(3))


@pytest.mark.parametrize("diag", [(-1, -1, 1), (-1, 1, -1), (1, -1, -1)])
def test_sign_diagonals(diag):
    check(np.diag(np.array(diag, dtype=float)), "real")


def test_permutation_matrices():
    P = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=float)
    check(P, "real")
    check(P.T, "real")


def test_complex_phase_diagonal():
    d = np.exp(1j * np.array([0.3, 1.1, -1.4]))
    check(np.diag(d), "complex")


def test_quaternion_input_stays_quaternionic(rng):
    A = C.sample("sp3", rng)
    t = check(A, "quaternion")
    assert t.A1.shape == (3, 3, 4)


def test_rejects_non_members():
    with pytest.raises(C.NotInGroup):
        C.decompose_classical(2 * np.eye(3), "real")
    with pytest.raises(C.NotInGroup):
        C.decompose_classical(np.diag([1.0, 1.0, -1.0]), "real")   # det = -1
    with pytest.raises(ValueError):
        C.decompose_classical(np.eye(3), "octonion")


def test_factor_order_matters(rng):
    A = C.sample("so3", rng)
    t = C.decompose_classical(A, "real")
    swapped = t.A2 @ t.A1 @ t.A1p
    assert np.linalg.norm(swapped - A) > 1e-3
