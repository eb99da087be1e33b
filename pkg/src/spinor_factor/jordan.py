"""The exceptional Jordan algebra J and its complexification J^C.

An element ``X = (xi1, xi2, xi3; x1, x2, x3)`` is the Hermitian octonion
matrix::

    [[ xi1,      x3,       conj(x2) ],
     [ conj(x3), xi2,      x1       ],
     [ x2,       conj(x1), xi3      ]]

and is stored as a flat 27-vector (``BASIS_VERSION``): the three diagonal
scalars, then the 8 coefficients of ``x1``, of ``x2`` and of ``x3``.
All functions broadcast over leading axes, so a batch of elements is an
``(n, 27)`` array.
"""

from __future__ import annotations

import numpy as np

from .algebra import inner, omul, oconj, tau

BASIS_VERSION = "J27-v1:xi1,xi2,xi3,x1[e0..e7],x2[e0..e7],x3[e0..e7]"
DIM = 27

XI = slice(0, 3)
X_SLOTS = (slice(3, 11), slice(11, 19), slice(19, 27))
# diagonal weights of (X, Y) in the flat basis
WEIGHTS = np.concatenate([np.ones(3), 2.0 * np.ones(24)])


def element(xi=(0, 0, 0), x=None, dtype=None):
    """Build a flat element from diagonal scalars and three octonions."""
    xi = np.asarray(xi)
    if x is None:
        x = np.zeros((3, 8))
    x = np.asarray(x)
    if dtype is None:
        dtype = np.result_type(xi, x, float)
    out = np.zeros(DIM, dtype=dtype)
    out[XI] = xi
    for k in range(3):
        out[X_SLOTS[k]] = x[k]
    return out


def split(X):
    """Return ``(xi, x)`` views with shapes ``(..., 3)`` and ``(..., 3, 8)``."""
    X = np.asarray(X)
    return X[..., XI], X[..., 3:].reshape(X.shape[:-1] + (3, 8))


def join(xi, x):
    xi = np.asarray(xi)
    x = np.asarray(x)
    return np.concatenate([xi, x.reshape(x.shape[:-2] + (24,))], axis=-1)


def E(k: int) -> np.ndarray:
    """The diagonal idempotent ``E_k`` (k = 1, 2, 3)."""
    e = np.zeros(DIM)
    e[k - 1] = 1.0
    return e


IDENTITY_ELEMENT = E(1) + E(2) + E(3)


def sharp(X):
    """``X x X``: the quadratic adjoint whose vanishing means rank one.

    Components::

        (xi2 xi3 - x1 conj(x1), xi3 xi1 - x2 conj(x2), xi1 xi2 - x3 conj(x3);
         conj(x2 x3) - xi1 x1, conj(x3 x1) - xi2 x2, conj(x1 x2) - xi3 x3)
    """
    xi, x = split(X)
    x1, x2, x3 = x[..., 0, :], x[..., 1, :], x[..., 2, :]
    n1, n2, n3 = inner(x1, x1), inner(x2, x2), inner(x3, x3)
    d = np.stack([
        xi[..., 1] * xi[..., 2] - n1,
        xi[..., 2] * xi[..., 0] - n2,
        xi[..., 0] * xi[..., 1] - n3,
    ], axis=-1)
    o = np.stack([
        oconj(omul(x2, x3)) - xi[..., 0, None] * x1,
        oconj(omul(x3, x1)) - xi[..., 1, None] * x2,
        oconj(omul(x1, x2)) - xi[..., 2, None] * x3,
    ], axis=-2)
    return join(d, o)


def cross(X, Y):
    """Freudenthal cross product, the polarisation of :func:`sharp`."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    return 0.5 * (sharp(X + Y) - sharp(X) - sharp(Y))


def trace(X):
    return np.sum(np.asarray(X)[..., XI], axis=-1)


def bilinear(X, Y):
    """``(X, Y) = sum xi_k eta_k + 2 sum (x_k, y_k)`` (complex-bilinear)."""
    return np.sum(WEIGHTS * np.asarray(X) * np.asarray(Y), axis=-1)


def hermitian(X, Y):
    """``<X, Y> = (tau X, Y)``; positive definite on J^C."""
    return bilinear(tau(X), Y)


def norm(X):
    return np.sqrt(np.real(hermitian(X, X)))


def forms(X, Y):
    """``(tr X, (X, Y), <X, Y>)``."""
    return trace(X), bilinear(X, Y), hermitian(X, Y)


def is_rank_one(X, tol: float = 1e-9):
    """Return ``(flag, residual)`` with ``residual = ||X x X||``."""
    res = float(norm(sharp(X)))
    return res <= tol, res


def shift(X, steps: int = 1):
    """Cyclic index shift ``k -> k + steps``: the new slot ``k + 1`` holds the old slot ``k``."""
    xi, x = split(X)
    return join(np.roll(xi, steps, axis=-1), np.roll(x, steps, axis=-2))


def shift_matrix(steps: int = 1) -> np.ndarray:
    return shift(np.eye(DIM), steps).T


# -- matrix model, kept separate from the component formulas above ---------

def to_matrix(X):
    """The 3x3 octonion matrix of ``X`` as an array of shape ``(3, 3, 8)``."""
    xi, x = split(X)
    one = np.zeros(8)
    one[0] = 1.0
    m = np.zeros((3, 3, 8), dtype=np.result_type(X, float))
    for k in range(3):
        m[k, k] = xi[k] * one
    x1, x2, x3 = x
    m[0, 1], m[0, 2] = x3, oconj(x2)
    m[1, 0], m[1, 2] = oconj(x3), x1
    m[2, 0], m[2, 1] = x2, oconj(x1)
    return m


def from_matrix(m):
    xi = m[[0, 1, 2], [0, 1, 2], 0]
    return element(xi, [m[1, 2], m[2, 0], m[0, 1]])


def matrix_product(a, b):
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
    for i in range(3):
        for j in range(3):
            out[i, j] = sum(omul(a[i, l], b[l, j]) for l in range(3))
    return out


def jordan_product(X, Y):
    """``X o Y = (XY + YX) / 2`` computed in the matrix model."""
    a, b = to_matrix(X), to_matrix(Y)
    return from_matrix(0.5 * (matrix_product(a, b) + matrix_product(b, a)))
