"""Quaternions, octonions and complexified octonions.

Everything is stored as plain numpy arrays with the coefficient axis last:
a quaternion is ``(..., 4)`` w.r.t. ``1, i, j, k`` and an octonion is
``(..., 8)`` w.r.t. ``e0 = 1, e1, ..., e7``.  A complexified octonion
``x = p + i q`` is simply an octonion array with complex dtype; the complex
unit commutes with every octonion unit, so multiplication extends
bilinearly without extra work.

Octonion product (Cayley-Dickson doubling over the quaternions, with
``x = (a, b) = a + b e4``)::

    (a, b)(c, d) = (a c - conj(d) b,  d a + b conj(c))

so that ``e1 e2 = e3``, ``e1 e4 = e5``, ``e2 e4 = e6``, ``e3 e4 = e7``.
The table generated from this formula is frozen in ``tests/data``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QUAT_CONJ = np.array([1.0, -1.0, -1.0, -1.0])
OCT_CONJ = np.array([1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0])


def _quaternion_table() -> np.ndarray:
    # T[i, j, k]: coefficient of unit k in (unit i)(unit j)
    t = np.zeros((4, 4, 4))
    units = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    for (i, j), (k, s) in units.items():
        t[i, j, k] = s
    return t


QUAT_TABLE = _quaternion_table()


def qmul(a, b):
    """Quaternion product, broadcasting over leading axes."""
    return np.einsum("...i,...j,ijk->...k", a, b, QUAT_TABLE)


def qconj(a):
    return np.asarray(a) * QUAT_CONJ


def _octonion_table() -> np.ndarray:
    t = np.zeros((8, 8, 8))
    eye = np.eye(8)
    for i in range(8):
        for j in range(8):
            t[i, j] = _cayley_dickson(eye[i], eye[j])
    return t


def _cayley_dickson(x, y):
    a, b = x[:4], x[4:]
    c, d = y[:4], y[4:]
    first = qmul(a, c) - qmul(qconj(d), b)
    second = qmul(d, a) + qmul(b, qconj(c))
    return np.concatenate([first, second])


OCT_TABLE = _octonion_table()
# (8, 64) view so a product is one matmul followed by a batched contraction
_OCT_LEFT = OCT_TABLE.reshape(8, 64)


def omul(a, b):
    """Octonion product ``a b``; works for real or complex coefficients."""
    a = np.asarray(a)
    b = np.asarray(b)
    left = (a @ _OCT_LEFT).reshape(a.shape[:-1] + (8, 8))
    return np.einsum("...jk,...j->...k", left, b)


def oconj(a):
    """Octonion conjugation ``bar``; complex-linear on complexified octonions."""
    return np.asarray(a) * OCT_CONJ


def tau(x):
    """Complex conjugation ``tau`` (acts on the commuting complex unit only)."""
    return np.conj(x)


def inner(a, b):
    """Real inner product ``(a, b) = (a conj(b) + b conj(a)) / 2``.

    Extended complex-bilinearly, so for ``x = p + i q`` one gets
    ``(a, x) = (a, p) + i (a, q)``.
    """
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


def norm(a):
    """Euclidean norm of the coefficient vector (Hermitian for complex input)."""
    return np.sqrt(np.sum(np.abs(np.asarray(a)) ** 2, axis=-1))


def mul_conj(x):
    """``x conj(x)`` as a scalar: ``|p|^2 - |q|^2 + 2 i (p, q)`` for ``x = p + i q``."""
    return inner(x, x)


def unit(k: int, n: int = 8) -> np.ndarray:
    e = np.zeros(n)
    e[k] = 1.0
    return e


def orthogonal_direction(*vectors, dim: int = 8) -> np.ndarray:
    """A unit real vector orthogonal to the real and imaginary parts of ``vectors``.

    Deterministic: Gram-Schmidt against the constraints, then the standard
    basis vector with the largest surviving component.
    """
    basis = []
    for v in vectors:
        v = np.asarray(v)
        for part in (v.real, v.imag) if np.iscomplexobj(v) else (v,):
            w = np.array(part, dtype=float)
            for b in basis:
                w = w - (w @ b) * b
            n = np.linalg.norm(w)
            if n > 1e-12:
                basis.append(w / n)
    if len(basis) >= dim:
        raise ValueError("no orthogonal direction left")
    proj = np.eye(dim)
    for b in basis:
        proj = proj - np.outer(b, b)
    k = int(np.argmax(np.linalg.norm(proj, axis=0)))
    w = proj[:, k]
    return w / np.linalg.norm(w)


def quat_polar(a):
    """Polar form ``a = r (cos t + u sin t)`` with ``r = |a|``, ``u^2 = -1``, ``t in [0, pi]``.

    For real ``a`` the imaginary unit is arbitrary; ``u = i`` is returned
    (``t = 0`` for ``a >= 0`` and ``t = pi`` for ``a < 0``).
    """
    a = np.asarray(a, dtype=float)
    r = float(np.linalg.norm(a))
    im = a.copy()
    im[0] = 0.0
    s = float(np.linalg.norm(im))
    if s == 0.0:
        u = unit(1, 4)
        theta = 0.0 if a[0] >= 0 else np.pi
    else:
        u = im / s
        theta = float(np.arctan2(s, a[0]))
    return r, u, theta


def quat_exp(u, theta):
    """``e^{u theta} = cos theta + u sin theta`` for a unit imaginary ``u``."""
    return np.cos(theta) * unit(0, 4) + np.sin(theta) * np.asarray(u, dtype=float)


def quat_inv(a):
    a = np.asarray(a, dtype=float)
    return qconj(a) / (a @ a)


@dataclass(frozen=True)
class Quaternion:
    coeffs: tuple

    def __init__(self, *coeffs):
        if len(coeffs) == 1:
            coeffs = tuple(np.asarray(coeffs[0], dtype=float).ravel())
        if len(coeffs) != 4:
            raise ValueError("a quaternion has 4 coefficients")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in coeffs))

    @property
    def array(self):
        return np.array(self.coeffs)

    def __mul__(self, other):
        return Quaternion(qmul(self.array, other.array))

    def __add__(self, other):
        return Quaternion(self.array + other.array)

    def __sub__(self, other):
        return Quaternion(self.array - other.array)

    def conj(self):
        return Quaternion(qconj(self.array))

    def __abs__(self):
        return float(np.linalg.norm(self.array))

    def polar(self):
        r, u, theta = quat_polar(self.array)
        return r, Quaternion(u), theta


@dataclass(frozen=True)
class Octonion:
    """Octonion with real or complex coefficients.

    ``p`` and ``q`` give the decomposition ``x = p + i q`` of a complexified
    octonion; for a real octonion ``q`` is zero.
    """

    coeffs: tuple

    def __init__(self, *coeffs):
        if len(coeffs) == 1:
            coeffs = tuple(np.asarray(coeffs[0]).ravel())
        if len(coeffs) != 8:
            raise ValueError("an octonion has 8 coefficients")
        vals = tuple(complex(c) if np.iscomplexobj(c) and complex(c).imag != 0 else float(np.real(c))
                     for c in coeffs)
        object.__setattr__(self, "coeffs", vals)

    @classmethod
    def from_pq(cls, p, q):
        return cls(np.asarray(p, dtype=float) + 1j * np.asarray(q, dtype=float))

    @property
    def array(self):
        return np.array(self.coeffs)

    @property
    def p(self):
        return np.real(self.array)

    @property
    def q(self):
        return np.imag(self.array)

    @property
    def is_real(self):
        return not np.any(self.q)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return Octonion(omul(self.array, other.array))
        return Octonion(self.array * other)

    __rmul__ = lambda self, other: Octonion(other * self.array)

    def __add__(self, other):
        return Octonion(self.array + other.array)

    def __sub__(self, other):
        return Octonion(self.array - other.array)

    def __neg__(self):
        return Octonion(-self.array)

    def bar(self):
        return Octonion(oconj(self.array))

    def tau(self):
        return Octonion(tau(self.array))

    def __abs__(self):
        return float(norm(self.array))

    def inner(self, other):
        val = inner(self.array, other.array)
        return complex(val) if np.iscomplexobj(val) else float(val)


ComplexCayleyNumber = Octonion
