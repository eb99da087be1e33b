"""The 56-dimensional space P^C = J^C + J^C + C + C.

A point ``P = (X, Y, xi, eta)`` is a flat complex 56-vector
(``BASIS_VERSION``): the 27 slots of ``X``, the 27 slots of ``Y``, then
``xi`` and ``eta``.
"""

from __future__ import annotations

import numpy as np

from . import jordan as J
from .algebra import inner, omul, oconj, tau

BASIS_VERSION = "P56-v1:X[J27-v1],Y[J27-v1],xi,eta"
DIM = 56
XS = slice(0, 27)
YS = slice(27, 54)
XI = 54
ETA = 55
WEIGHTS = np.concatenate([J.WEIGHTS, J.WEIGHTS, [1.0, 1.0]])

ONE_DOT = np.zeros(DIM, dtype=complex)
ONE_DOT[ETA] = 1.0


def point(X=None, Y=None, xi=0.0, eta=0.0):
    P = np.zeros(DIM, dtype=complex)
    if X is not None:
        P[XS] = X
    if Y is not None:
        P[YS] = Y
    P[XI] = xi
    P[ETA] = eta
    return P


def parts(P):
    P = np.asarray(P)
    return P[..., XS], P[..., YS], P[..., XI], P[..., ETA]


def kappa(k: int, P):
    """``kappa_k(X, Y, xi, eta) = (-(E_k, X) E_k + 4 E_k x (E_k x X),
    (E_k, Y) E_k - 4 E_k x (E_k x Y), -xi, eta)``."""
    X, Y, xi, eta = parts(P)
    Ek = J.E(k)
    ex = J.bilinear(Ek, X)[..., None]
    ey = J.bilinear(Ek, Y)[..., None]
    Xn = -ex * Ek + 4 * J.cross(Ek, J.cross(Ek, X))
    Yn = ey * Ek - 4 * J.cross(Ek, J.cross(Ek, Y))
    return np.concatenate([Xn, Yn, -xi[..., None], eta[..., None]], axis=-1)


def mu(k: int, P):
    """``mu_k(X, Y, xi, eta) = (2 E_k x Y + eta E_k, 2 E_k x X + xi E_k, (E_k, Y), (E_k, X))``."""
    X, Y, xi, eta = parts(P)
    Ek = J.E(k)
    Xn = 2 * J.cross(Ek, Y) + eta[..., None] * Ek
    Yn = 2 * J.cross(Ek, X) + xi[..., None] * Ek
    return np.concatenate([Xn, Yn, J.bilinear(Ek, Y)[..., None], J.bilinear(Ek, X)[..., None]],
                          axis=-1)


def kappa_matrix(k: int) -> np.ndarray:
    return kappa(k, np.eye(DIM, dtype=complex)).T


def mu_matrix(k: int) -> np.ndarray:
    return mu(k, np.eye(DIM, dtype=complex)).T


def inner_P(P, Q):
    """``<P, Q> = <X, X'> + <Y, Y'> + (tau xi) xi' + (tau eta) eta'``."""
    return np.sum(WEIGHTS * tau(np.asarray(P)) * np.asarray(Q), axis=-1)


def norm(P):
    return np.sqrt(np.real(inner_P(P, P)))


def rank1_residuals(P) -> np.ndarray:
    """The seventeen identities satisfied by every point with ``P x P = 0``.

    Returns shape ``(..., 17)``; entry ``n - 1`` holds identity ``(n)``: the
    modulus for scalar identities, the Hermitian norm for octonion-valued
    ones.  These are necessary conditions only; for ``eta != 0`` the
    identities (2)-(13) already force rank one.
    """
    X, Y, xi, eta = parts(np.asarray(P))
    a, x = J.split(X)
    b, y = J.split(Y)
    x1, x2, x3 = x[..., 0, :], x[..., 1, :], x[..., 2, :]
    y1, y2, y3 = y[..., 0, :], y[..., 1, :], y[..., 2, :]
    a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2]
    b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2]
    ip = inner

    def cj(u, v):
        return oconj(omul(u, v))

    def sc(s, o):
        return s[..., None] * o

    scalars = [
        np.sum(a * b, axis=-1) + 2 * (ip(x1, y1) + ip(x2, y2) + ip(x3, y3)) - 3 * xi * eta,
        a2 * a3 - b1 * eta - ip(x1, x1),
        a3 * a1 - b2 * eta - ip(x2, x2),
        a1 * a2 - b3 * eta - ip(x3, x3),
    ]
    octs = [
        sc(a1, x1) + sc(eta, y1) - cj(x2, x3),
        sc(a2, x2) + sc(eta, y2) - cj(x3, x1),
        sc(a3, x3) + sc(eta, y3) - cj(x1, x2),
    ]
    scalars2 = [
        b2 * b3 - a1 * xi - ip(y1, y1),
        b3 * b1 - a2 * xi - ip(y2, y2),
        b1 * b2 - a3 * xi - ip(y3, y3),
    ]
    octs2 = [
        sc(b1, y1) + sc(xi, x1) - cj(y2, y3),
        sc(b2, y2) + sc(xi, x2) - cj(y3, y1),
        sc(b3, y3) + sc(xi, x3) - cj(y1, y2),
        sc(b3, x1) + sc(a2, y1) + cj(y2, x3),
        sc(b3, x2) + sc(a1, y2) + cj(x3, y1),
        sc(b2, x3) + sc(a1, y3) + cj(y1, x2),
        sc(b1, x3) + sc(a2, y3) + cj(x1, y2),
    ]
    onorm = lambda o: np.sqrt(np.sum(np.abs(o) ** 2, axis=-1))
    cols = ([np.abs(s) for s in scalars] + [onorm(o) for o in octs]
            + [np.abs(s) for s in scalars2] + [onorm(o) for o in octs2])
    return np.stack(cols, axis=-1).astype(float)


def rank_one_point(A, scale=1.0):
    """``scale * (A, A x A, (A, A x A) / 3, 1)``, a rank-one point for any ``A`` in J^C.

    This is the image of the unit point under ``exp`` of the nilpotent map
    ``(X, Y, xi, eta) -> (eta A, 2 A x X, (A, Y), 0)``; it gives a supply of
    rank-one probes that does not depend on any group generator.
    """
    A = np.asarray(A, dtype=complex)
    S = J.sharp(A)
    return scale * point(A, S, J.bilinear(A, S) / 3.0, 1.0)


def is_rank_one_normal_form(P, tol: float = 1e-9):
    """Complete rank-one test for ``eta != 0``: ``Y = X#/eta`` and ``xi = (X, X#)/(3 eta^2)``."""
    X, Y, xi, eta = parts(np.asarray(P))
    if abs(eta) <= tol:
        raise ValueError("normal-form test needs eta != 0")
    S = J.sharp(X)
    res = max(float(J.norm(Y - S / eta)), abs(xi - J.bilinear(X, S) / (3 * eta ** 2)))
    return res <= tol, res


def shift(P, steps: int = 1):
    X, Y, xi, eta = parts(np.asarray(P))
    return np.concatenate([J.shift(X, steps), J.shift(Y, steps), xi[..., None], eta[..., None]],
                          axis=-1)


def shift_matrix(steps: int = 1) -> np.ndarray:
    return shift(np.eye(DIM, dtype=complex), steps).T
