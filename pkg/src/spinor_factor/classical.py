"""Factorisation ``A = A1 A2 A1'`` in SO(3), SU(3) and Sp(3).

``A1`` and ``A1'`` fix ``e1`` and ``A2`` fixes ``e2``.  All three groups go
through one quaternionic code path: a real or complex matrix is viewed as a
quaternion matrix whose entries live in ``R`` or ``C = R + R i``, and every
rotation built below stays inside that subring.

Matrices are numpy arrays: ``(3, 3)`` real, ``(3, 3)`` complex, or
``(3, 3, 4)`` quaternion (coefficients w.r.t. ``1, i, j, k``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import QUAT_TABLE, qconj, qmul, quat_exp, quat_inv, quat_polar

RINGS = ("real", "complex", "quaternion")
GROUP_RING = {"so3": "real", "su3": "complex", "sp3": "quaternion"}


class NotInGroup(ValueError):
    pass


# -- quaternion matrices ------------------------------------------------------

def to_quaternion(A, ring: str) -> np.ndarray:
    A = np.asarray(A)
    if ring == "quaternion":
        return np.asarray(A, dtype=float)
    Q = np.zeros(A.shape + (4,))
    Q[..., 0] = A.real
    if ring == "complex":
        Q[..., 1] = A.imag
    return Q


def from_quaternion(Q, ring: str) -> np.ndarray:
    if ring == "quaternion":
        return Q
    if ring == "complex":
        return Q[..., 0] + 1j * Q[..., 1]
    return Q[..., 0].copy()


def qmat_mul(A, B):
    return np.einsum("ilp,ljq,pqr->ijr", A, B, QUAT_TABLE)


def qmat_adjoint(A):
    return qconj(np.swapaxes(A, 0, 1))


def qmat_identity(n: int = 3):
    Q = np.zeros((n, n, 4))
    Q[np.arange(n), np.arange(n), 0] = 1.0
    return Q


def qvec_norm(v):
    return float(np.sqrt(np.sum(v ** 2)))


def membership_residual(A, ring: str) -> float:
    """``||A* A - E||_max`` plus ``|det A - 1|`` for SO(3)/SU(3)."""
    Q = to_quaternion(A, ring)
    res = float(np.abs(qmat_mul(qmat_adjoint(Q), Q) - qmat_identity()).max())
    if ring != "quaternion":
        res = max(res, float(abs(np.linalg.det(A) - 1.0)))
    return res


# -- the construction ---------------------------------------------------------

@dataclass
class FactorTriple:
    A1: np.ndarray
    A2: np.ndarray
    A1p: np.ndarray
    ring: str
    labels: tuple = ("fixes-e1", "fixes-e2", "fixes-e1")

    def product(self):
        Q = [to_quaternion(M, self.ring) for M in (self.A1, self.A2, self.A1p)]
        return from_quaternion(qmat_mul(qmat_mul(Q[0], Q[1]), Q[2]), self.ring)


def _half_turns(ratio, ring):
    """Polar data ``(u, alpha)`` of ``ratio = |ratio| e^{u alpha}`` plus the
    sign of ``cot`` to use.  Over the reals ``e^{u pi/2}`` is not real, so a
    negative ratio is handled with ``alpha = 0`` and a mirrored angle."""
    _, u, alpha = quat_polar(ratio)
    if ring == "real" and alpha > np.pi / 2:
        return u, 0.0, -1.0
    return u, alpha, 1.0


def _b1(a2, a3, ring):
    u, alpha, sign = _half_turns(qmul(a3, quat_inv(a2)), ring)
    theta = np.arctan2(np.linalg.norm(a2), sign * np.linalg.norm(a3))  # cot = sign |a3|/|a2|
    plus, minus = quat_exp(u, alpha / 2), quat_exp(u, -alpha / 2)
    B = qmat_identity()
    B[1, 1] = plus * np.cos(theta)
    B[1, 2] = -minus * np.sin(theta)
    B[2, 1] = plus * np.sin(theta)
    B[2, 2] = minus * np.cos(theta)
    return B


def _b2(b1, b3, ring):
    v, beta, sign = _half_turns(qmul(b1, quat_inv(b3)), ring)
    phi = np.arctan2(np.linalg.norm(b3), -sign * np.linalg.norm(b1))  # cot = -sign |b1|/|b3|
    plus, minus = quat_exp(v, beta / 2), quat_exp(v, -beta / 2)
    B = qmat_identity()
    B[0, 0] = minus * np.cos(phi)
    B[0, 2] = -plus * np.sin(phi)
    B[2, 0] = minus * np.sin(phi)
    B[2, 2] = plus * np.cos(phi)
    return B


def _mirror(B, rows):
    """Same rotation with the angle replaced by ``pi - angle``."""
    M = B.copy()
    i, j = rows
    M[i, i] *= -1
    M[j, j] *= -1
    return M


def _zeroing(B, Q, slot, tol):
    col = qmat_mul(B, Q)[:, 0]
    return qvec_norm(col[slot]) <= tol


def decompose_classical(A, ring: str, tol: float = 1e-9) -> FactorTriple:
    """Factor ``A`` as ``A1 A2 A1'`` with ``A1 e1 = A1' e1 = e1`` and ``A2 e2 = e2``."""
    if ring not in RINGS:
        raise ValueError(f"unknown ring {ring!r}")
    res = membership_residual(A, ring)
    if res > tol:
        raise NotInGroup(f"membership residual {res:.3g} exceeds {tol:g}")
    Q = to_quaternion(A, ring)
    scale = 1e-10
    a = Q[:, 0]
    B1 = qmat_identity()
    if qvec_norm(a[1]) > 1e-14:
        B1 = _b1(a[1], a[2], ring)
        if not _zeroing(B1, Q, 1, scale):
            B1 = _mirror(B1, (1, 2))
    b = qmat_mul(B1, Q)[:, 0]
    B2 = qmat_identity()
    if qvec_norm(b[2]) > 1e-14:
        B2 = _b2(b[0], b[2], ring)
        if not _zeroing(B2, qmat_mul(B1, Q), 2, scale):
            B2 = _mirror(B2, (0, 2))
    c1 = qmat_mul(qmat_mul(B2, B1), Q)[0, 0, :]
    _, w, gamma = quat_polar(c1)
    B2p = qmat_identity()
    B2p[0, 0] = quat_exp(w, -gamma)
    B2p[2, 2] = quat_exp(w, gamma)
    C = qmat_mul(B2p, B2)
    A1 = qmat_adjoint(B1)
    A2 = qmat_adjoint(C)
    A1p = qmat_mul(qmat_mul(C, B1), Q)
    return FactorTriple(*(from_quaternion(M, ring) for M in (A1, A2, A1p)), ring=ring)


def verify_factors(A, triple: FactorTriple) -> dict:
    """Reconstruction error and how far each factor is from fixing its basis vector."""
    ring = triple.ring
    e = np.eye(3)

    def fix(M, k):
        Q = to_quaternion(M, ring)
        return qvec_norm(Q[:, k] - to_quaternion(e[:, k], "real"))

    rec = triple.product() - np.asarray(A)
    out = {
        "reconstruction": float(np.linalg.norm(rec)),
        "A1_fixes_e1": fix(triple.A1, 0),
        "A2_fixes_e2": fix(triple.A2, 1),
        "A1p_fixes_e1": fix(triple.A1p, 0),
        "membership": max(membership_residual(M, ring)
                          for M in (triple.A1, triple.A2, triple.A1p)),
    }
    return out


# -- sampling -----------------------------------------------------------------

def _qgram_schmidt(Q):
    cols = []
    for j in range(Q.shape[1]):
        v = Q[:, j].copy()
        for c in cols:
            # v -= c <c, v> with <c, v> = sum conj(c_i) v_i (left-linear coefficient on the right)
            coef = sum(qmul(qconj(c[i]), v[i]) for i in range(3))
            v = v - np.array([qmul(c[i], coef) for i in range(3)])
        cols.append(v / qvec_norm(v))
    return np.stack(cols, axis=1)


def sample(group: str, rng: np.random.Generator) -> np.ndarray:
    """A random element of SO(3), SU(3) or Sp(3) (Gaussian matrix, orthonormalised)."""
    if group == "so3":
        q, r = np.linalg.qr(rng.normal(size=(3, 3)))
        q = q * np.sign(np.diag(r))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        return q
    if group == "su3":
        z = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        q, r = np.linalg.qr(z)
        d = np.diag(r)
        q = q * (d / np.abs(d))
        q[:, 0] = q[:, 0] / np.linalg.det(q)
        return q
    if group == "sp3":
        return _qgram_schmidt(rng.normal(size=(3, 3, 4)))
    raise ValueError(f"unknown classical group {group!r}")
