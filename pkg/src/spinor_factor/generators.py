"""One-parameter spinor generators and subgroup membership checks.

Every generator family ``alpha, beta, gamma, delta`` with octonion
parameter ``a`` has the same shape on its invariant subspaces:

* a *vector* part: a plane rotation by ``2|a|`` between one scalar axis and
  the octonion direction ``a/|a|`` of one slot,
* a *spinor* part: pairs of octonion slots ``(u, v)`` mixed by
  ``u -> u cos|a| + s_u c M(v, a) sin|a|/|a|`` and
  ``v -> v cos|a| + s_v c M'(a, u) sin|a|/|a|``.

The scalar axes, slot pairings, coefficients ``c`` and base signs live in
``TEMPLATES``.  The remaining discrete conventions (multiplication order,
conjugation, two sign flips, spinor half angle) form a
:class:`ConventionProfile`; :func:`calibrate` picks the unique profile that
passes the group laws and the behavioural contracts of the reductions.

``eps1`` and ``eps2`` are closed forms and need no calibration.

Index shift ``k -> k + 1`` is conjugation by the cyclic slot permutation
``S`` (``S E_k = E_{k+1}``), which lies in F4.
"""

from __future__ import annotations

import itertools
import json
import logging
import os
import warnings
from dataclasses import asdict, astuple, dataclass, field
from functools import lru_cache

import numpy as np

from . import freudenthal as F
from . import jordan as J
from .algebra import omul, oconj, orthogonal_direction

log = logging.getLogger(__name__)

FAMILIES = ("alpha", "beta", "gamma", "delta", "eps1", "eps2")
CALIBRATED_FAMILIES = ("alpha", "beta", "gamma", "delta")
CALIBRATION_ENV = "SPINOR_FACTOR_CALIBRATION"

SPACE_DIM = {"J": 27, "JC": 27, "PC": 56}
NATIVE_SPACE = {"alpha": "J", "beta": "JC", "eps2": "JC",
                "gamma": "PC", "delta": "PC", "eps1": "PC"}
SUBGROUP_RANK = {"J": 9, "JC": 10, "PC": 12}


class UncalibratedFamily(RuntimeError):
    pass


class NoProfileSatisfies(RuntimeError):
    pass


class MembershipViolation(RuntimeError):
    pass


class ZeroParameterWarning(UserWarning):
    pass


# -- data types ---------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """A single generator: family, index ``k`` and its parameter.

    ``param`` is an 8-tuple (octonion) for alpha..delta, a complex number
    with modulus one for eps1, a real ``t`` for eps2.
    """

    family: str
    k: int
    param: object

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.k not in (1, 2, 3):
            raise ValueError("index k must be 1, 2 or 3")
        p = self.param
        if self.family in CALIBRATED_FAMILIES:
            p = np.asarray(p, dtype=float)
            if np.ndim(p) == 0:
                p = float(p) * np.eye(8)[0]
            object.__setattr__(self, "param", tuple(float(c) for c in p))
        elif self.family == "eps1":
            object.__setattr__(self, "param", complex(p))
        else:
            object.__setattr__(self, "param", float(p))

    def inverse(self) -> "GeneratorSpec":
        if self.family in CALIBRATED_FAMILIES:
            return GeneratorSpec(self.family, self.k, tuple(-c for c in self.param))
        if self.family == "eps1":
            return GeneratorSpec(self.family, self.k, 1.0 / self.param)
        return GeneratorSpec(self.family, self.k, -self.param)

    def shifted(self, steps: int) -> "GeneratorSpec":
        return GeneratorSpec(self.family, (self.k - 1 + steps) % 3 + 1, self.param)

    def to_json(self):
        p = self.param
        if self.family == "eps1":
            p = [p.real, p.imag]
        elif self.family in CALIBRATED_FAMILIES:
            p = list(p)
        return {"family": self.family, "k": self.k, "param": p}

    @classmethod
    def from_json(cls, d):
        p = d["param"]
        if d["family"] == "eps1":
            p = complex(p[0], p[1])
        return cls(d["family"], int(d["k"]), p)

    def __str__(self):
        if self.family in CALIBRATED_FAMILIES:
            a = np.asarray(self.param)
            return f"{self.family}_{self.k}(|a|={np.linalg.norm(a):.6g})"
        return f"{self.family}_{self.k}({self.param:.6g})"


@dataclass(frozen=True)
class ConventionProfile:
    """Discrete conventions left open by the generator templates."""

    swap_order: bool = False   # M(v, a) = a v instead of v a
    conjugate: bool = True     # wrap both spinor products in octonion conjugation
    flip_first: bool = False   # negate the s_u term
    flip_second: bool = False  # negate the s_v term
    half_angle: bool = True    # spinor angle |a| (True) or 2|a| (False)

    @classmethod
    def all(cls):
        for bits in itertools.product((False, True), repeat=5):
            yield cls(*bits)

    def bits(self) -> str:
        return "".join("1" if b else "0" for b in astuple(self))

    @classmethod
    def from_bits(cls, bits: str):
        return cls(*(c == "1" for c in bits))


@dataclass
class GroupOperator:
    """A dense linear operator on J (27 real), J^C (27) or P^C (56).

    ``word`` lists the generators in the order they are applied, so the
    matrix is ``g_m ... g_2 g_1``; it is ``None`` for operators that did not
    come from generators.
    """

    matrix: np.ndarray
    space: str
    claim: str
    word: tuple | None = field(default=())
    provenance: str = "generators"

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __matmul__(self, other: "GroupOperator") -> "GroupOperator":
        if self.space != other.space:
            raise ValueError(f"space mismatch: {self.space} vs {other.space}")
        claim = self.claim if self.claim == other.claim else group_of(self.space)
        word = None if self.word is None or other.word is None else other.word + self.word
        prov = "generators" if word is not None else "product"
        return GroupOperator(self.matrix @ other.matrix, self.space, claim, word, prov)

    def apply(self, v):
        return self.matrix @ v

    def inverse(self) -> "GroupOperator":
        if self.word is not None:
            return word_operator(inverse_word(self.word), self.space, self.claim)
        return GroupOperator(np.linalg.inv(self.matrix), self.space, self.claim, None, "inverse")


def inverse_word(word) -> tuple:
    return tuple(g.inverse() for g in reversed(word))


def group_of(space: str) -> str:
    return {"J": "F4", "JC": "E6", "PC": "E7"}[space]


def subgroup_label(k: int, space: str) -> str:
    return f"Spin{k}({SUBGROUP_RANK[space]})"


# -- templates ----------------------------------------------------------------

@dataclass(frozen=True)
class _Axis:
    weights: dict      # slot -> coefficient giving the axis coordinate
    back: dict         # slot -> coefficient of the update direction
    octonion: int      # start index of the paired octonion slot
    orient: int        # +1: v' = v cos + c sin ; -1: reversed


@dataclass(frozen=True)
class _Pair:
    u: int
    v: int
    coef: complex
    su: int
    sv: int


@dataclass(frozen=True)
class Template:
    space: str
    axes: tuple
    pairs: tuple


_X = lambda j: j            # noqa: E731  slot j of X
_Y = lambda j: 27 + j        # noqa: E731  slot j of Y
_XO = lambda n: 3 + 8 * (n - 1)        # noqa: E731  start of x_n
_YO = lambda n: 27 + 3 + 8 * (n - 1)   # noqa: E731  start of y_n

TEMPLATES = {
    "alpha": Template("J",
                      (_Axis({1: 0.5, 2: -0.5}, {1: 1.0, 2: -1.0}, _XO(1), +1),),
                      (_Pair(_XO(2), _XO(3), 1.0, -1, +1),)),
    "beta": Template("JC",
                     (_Axis({1: 0.5 / 1j, 2: 0.5 / 1j}, {1: 1j, 2: 1j}, _XO(1), +1),),
                     (_Pair(_XO(2), _XO(3), 1j, +1, +1),)),
    "gamma": Template("PC",
                      (_Axis({F.ETA: 0.5, 27: 0.5}, {F.ETA: 1.0, 27: 1.0}, _XO(1), -1),
                       _Axis({0: 0.5, F.XI: 0.5}, {0: 1.0, F.XI: 1.0}, _YO(1), +1)),
                      (_Pair(_XO(2), _YO(3), 1.0, -1, +1),
                       _Pair(_YO(2), _XO(3), 1.0, +1, -1))),
    "delta": Template("PC",
                      (_Axis({27: 0.5 / 1j, F.ETA: -0.5 / 1j}, {27: 1j, F.ETA: -1j}, _XO(1), -1),
                       _Axis({0: 0.5 / 1j, F.XI: -0.5 / 1j}, {0: 1j, F.XI: -1j}, _YO(1), -1)),
                      (_Pair(_XO(2), _YO(3), 1j, +1, +1),
                       _Pair(_YO(2), _XO(3), 1j, +1, +1))),
}


def apply_template(template: Template, a, V, profile: ConventionProfile, vector_sign: int = 1):
    """Apply the index-1 template with parameter ``a`` to the rows of ``V``."""
    a = np.asarray(a, dtype=float)
    rho = float(np.linalg.norm(a))
    V = np.array(V, dtype=complex)
    if rho == 0.0:
        return V
    ahat = a / rho
    theta = 2.0 * rho
    for ax in template.axes:
        o = slice(ax.octonion, ax.octonion + 8)
        vp = sum(w * V[:, s] for s, w in ax.weights.items())
        c = V[:, o] @ ahat
        ang = vector_sign * ax.orient * theta
        vp_new = vp * np.cos(ang) + c * np.sin(ang)
        c_new = c * np.cos(ang) - vp * np.sin(ang)
        for s, b in ax.back.items():
            V[:, s] += b * (vp_new - vp)
        V[:, o] += np.outer(c_new - c, ahat)
    h = rho if profile.half_angle else 2.0 * rho
    cs, sn = np.cos(h), np.sin(h) / rho
    fu = -1.0 if profile.flip_first else 1.0
    fv = -1.0 if profile.flip_second else 1.0
    updates = []
    for pr in template.pairs:
        u = V[:, pr.u:pr.u + 8]
        v = V[:, pr.v:pr.v + 8]
        if profile.swap_order:
            mv, mu_ = omul(a, v), omul(u, a)
        else:
            mv, mu_ = omul(v, a), omul(a, u)
        if profile.conjugate:
            mv, mu_ = oconj(mv), oconj(mu_)
        updates.append((pr.u, u * cs + fu * pr.su * pr.coef * mv * sn))
        updates.append((pr.v, v * cs + fv * pr.sv * pr.coef * mu_ * sn))
    for start, val in updates:
        V[:, start:start + 8] = val
    return V


def template_matrix(family: str, a, profile: ConventionProfile, vector_sign: int = 1):
    t = TEMPLATES[family]
    n = SPACE_DIM[t.space]
    cols = apply_template(t, a, np.eye(n, dtype=complex), profile, vector_sign)
    return cols.T


def eps2_matrix(t: float) -> np.ndarray:
    """``(e^{it} xi1, xi2, e^{-it} xi3; e^{-it/2} x1, x2, e^{it/2} x3)`` (fixes E2)."""
    d = np.ones(27, dtype=complex)
    d[0] = np.exp(1j * t)
    d[2] = np.exp(-1j * t)
    d[J.X_SLOTS[0]] = np.exp(-0.5j * t)
    d[J.X_SLOTS[2]] = np.exp(0.5j * t)
    return np.diag(d)


def eps1_matrix(theta: complex) -> np.ndarray:
    """``((th^-2 xi1, xi2, xi3; x1, th^-1 x2, th^-1 x3),
    (th^2 eta1, eta2, eta3; y1, th y2, th y3), th^2 xi, th^-2 eta)``."""
    th = complex(theta)
    d = np.ones(56, dtype=complex)
    d[0] = th ** -2
    d[J.X_SLOTS[1]] = th ** -1
    d[J.X_SLOTS[2]] = th ** -1
    d[27] = th ** 2
    d[27 + 11:27 + 27] = th
    d[F.XI] = th ** 2
    d[F.ETA] = th ** -2
    return np.diag(d)


# -- shifting and embedding ---------------------------------------------------

@lru_cache(maxsize=None)
def _shift(space: str, steps: int) -> np.ndarray:
    steps %= 3
    if space == "PC":
        return F.shift_matrix(steps)
    return J.shift_matrix(steps).astype(complex)


def conjugate_by_shift(M: np.ndarray, space: str, steps: int) -> np.ndarray:
    steps %= 3
    if steps == 0:
        return M
    S = _shift(space, steps)
    return S @ M @ S.T


def embed_matrix(M: np.ndarray, source: str, target: str) -> np.ndarray:
    order = ["J", "JC", "PC"]
    if order.index(target) < order.index(source):
        raise ValueError(f"cannot embed {source} into {target}")
    M = np.asarray(M, dtype=complex)
    if source != "PC" and target == "PC":
        out = np.zeros((56, 56), dtype=complex)
        out[:27, :27] = M
        out[27:54, 27:54] = np.conj(M)
        out[54, 54] = out[55, 55] = 1.0
        return out
    return M


def embed(op: GroupOperator, target: str, check: bool = False) -> GroupOperator:
    """F4 -> E6: complex-linear extension; E6 -> E7: ``(X, Y, xi, eta) -> (bX, tau b tau Y, xi, eta)``."""
    M = embed_matrix(op.matrix, op.space, target)
    claim = op.claim
    if claim.startswith("Spin"):
        claim = subgroup_label(int(claim[4]), target)
    elif claim in ("F4", "E6", "E7"):
        claim = group_of(target)
    out = GroupOperator(M, target, claim, op.word, op.provenance)
    if check:
        r = membership_residual(out)
        if r["max"] > 1e-8:
            raise MembershipViolation(f"embedded operator fails {claim}: {r['max']:.3g}")
    return out


# -- calibration --------------------------------------------------------------

_PROFILES: dict = {}
_CAL_REPORT: dict = {}


def _load_cache():
    path = os.environ.get(CALIBRATION_ENV)
    if not path or not os.path.exists(path):
        return
    with open(path) as fh:
        data = json.load(fh)
    for fam, entry in data.get("families", {}).items():
        _PROFILES[fam] = ConventionProfile(**entry["profile"])
        _CAL_REPORT[fam] = entry


# when False, a missing profile raises instead of triggering a calibration run
AUTO_CALIBRATE = True


def profile_for(family: str) -> ConventionProfile:
    if family not in _PROFILES:
        if not _PROFILES:
            _load_cache()
        if family not in _PROFILES:
            if not AUTO_CALIBRATE:
                raise UncalibratedFamily(family)
            _PROFILES[family] = calibrate(family)
    return _PROFILES[family]


def calibration_report(family: str) -> dict:
    profile_for(family)
    return _CAL_REPORT[family]


def set_profile(family: str, profile: ConventionProfile | None):
    if profile is None:
        _PROFILES.pop(family, None)
    else:
        _PROFILES[family] = profile


@dataclass
class CalibrationResult:
    family: str
    profile: ConventionProfile
    survivors: list
    residuals: dict

    def to_json(self):
        return {"profile": asdict(self.profile), "bits": self.profile.bits(),
                "survivors": [p.bits() for p in self.survivors],
                "residuals": self.residuals}


def _random_octonions(rng, n, max_angle=np.pi):
    d = rng.normal(size=(n, 8))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * rng.uniform(0.05, max_angle, size=(n, 1))


def _membership_of_matrix(M, family, k=1):
    space = TEMPLATES[family].space
    M = conjugate_by_shift(M, space, k - 1)
    op = GroupOperator(M, space, subgroup_label(k, space), None, "calibration")
    return membership_residual(op, n_random=20)["max"]


def _contract_residual(family, profile, vector_sign, rng, n=10):
    """Behavioural contracts taken from the reduction steps that use each family."""
    worst = 0.0
    if family == "alpha":
        for _ in range(n):
            # zeroing x1 when xi2 = xi3
            x = rng.normal(size=(3, 8))
            s = rng.normal()
            X = J.element([rng.normal(), s, s], x)
            a = np.pi * x[0] / (4 * np.linalg.norm(x[0]))
            out = template_matrix(family, a, profile, vector_sign) @ X
            worst = max(worst, np.linalg.norm(out[J.X_SLOTS[0]]))
            # zeroing z3 with cot(t|z2 z3|) = -|z2|/|z3|
            z = rng.normal(size=(2, 8))
            Z = J.element([rng.normal(), 0, 0], [np.zeros(8), z[0], z[1]])
            n2, n3 = np.linalg.norm(z[0]), np.linalg.norm(z[1])
            t = np.arctan2(n3, -n2) / (n2 * n3)
            a = t * oconj(omul(z[0], z[1]))
            out = template_matrix(family, a, profile, vector_sign) @ Z
            worst = max(worst, np.linalg.norm(out[J.X_SLOTS[2]]))
    elif family == "beta":
        for _ in range(n):
            x1 = rng.normal(size=8) + 1j * rng.normal(size=8)
            s = rng.normal() + 1j * rng.normal()
            X = J.element([rng.normal(), s, s], [x1, np.zeros(8), np.zeros(8)])
            b = orthogonal_direction(x1) * np.pi / 4
            out = template_matrix(family, b, profile, vector_sign) @ X
            worst = max(worst, abs(out[1]), abs(out[2]))
    else:
        M = template_matrix(family, np.pi / 2 * np.eye(8)[0], profile, vector_sign)
        for _ in range(n):
            eta1 = rng.normal() + 1j * rng.normal()
            P = F.point(Y=eta1 * J.E(1))
            out = M @ P
            # case (II) -> case (I): the eta1 slot is emptied into eta
            worst = max(worst, abs(out[27]), abs(abs(out[F.ETA]) - abs(eta1)))
    return float(worst)


def calibrate(family: str, k: int = 1, *, vector_sign: int = 1, seed: int = 0,
              n_inputs: int = 100, tol: float = 1e-9) -> ConventionProfile:
    """Exhaustively test the 32 convention profiles of a template family.

    A profile survives when its operators pass the group laws of the
    family's subgroup on ``n_inputs`` random parameters and satisfy every
    behavioural contract.  Membership is checked for the index-``k``
    conjugate.  ``vector_sign=-1`` flips the template's vector rotation
    (used as a negative control).  The full sweep is kept in
    :func:`calibration_report`.
    """
    if family not in CALIBRATED_FAMILIES:
        raise ValueError(f"{family} is a closed form and needs no calibration")
    survivors = []
    residuals = {}
    for profile in ConventionProfile.all():
        rng = np.random.default_rng(seed)
        worst = _contract_residual(family, profile, vector_sign, rng)
        if worst <= tol:
            for a in _random_octonions(rng, n_inputs):
                M = template_matrix(family, a, profile, vector_sign)
                worst = max(worst, _membership_of_matrix(M, family, k))
                if worst > tol:
                    break
        residuals[profile.bits()] = worst
        if worst <= tol:
            survivors.append(profile)
    if not survivors:
        raise NoProfileSatisfies(f"no convention profile passes for {family}")
    if len(survivors) > 1:
        warnings.warn(f"{len(survivors)} profiles pass for {family}; using the first",
                      RuntimeWarning)
    result = CalibrationResult(family, survivors[0], survivors, residuals)
    _CAL_REPORT[family] = result.to_json()
    log.info("calibrated %s -> %s", family, survivors[0].bits())
    return result.profile


def calibrate_all(path: str | None = None, **kw) -> dict:
    results = {}
    for fam in CALIBRATED_FAMILIES:
        _PROFILES[fam] = results[fam] = calibrate(fam, **kw)
    if path:
        payload = {"schema": "spinor-factor/calibration/v1",
                   "families": {f: _CAL_REPORT[f] for f in results}}
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
        os.replace(tmp, path)
    return results


# -- generator construction ---------------------------------------------------

def generator_matrix(spec: GeneratorSpec, space: str | None = None,
                     profile: ConventionProfile | None = None) -> np.ndarray:
    space = space or NATIVE_SPACE[spec.family]
    if spec.family in CALIBRATED_FAMILIES:
        profile = profile or profile_for(spec.family)
    M = _generator_matrix(spec, space, profile)
    M.flags.writeable = False
    return M


@lru_cache(maxsize=4096)
def _generator_matrix(spec, space, profile):
    native = NATIVE_SPACE[spec.family]
    if spec.family in CALIBRATED_FAMILIES:
        a = np.asarray(spec.param)
        if not np.any(a):
            M = np.eye(SPACE_DIM[native], dtype=complex)
        else:
            M = template_matrix(spec.family, a, profile)
        steps = spec.k - 1
    elif spec.family == "eps2":
        M = eps2_matrix(spec.param)
        steps = spec.k - 2
    else:
        M = eps1_matrix(spec.param)
        steps = spec.k - 1
    M = conjugate_by_shift(M, native, steps)
    if native == "J":
        M = M.real
        if space != "J":
            M = M.astype(complex)
    return embed_matrix(M, native if native != "J" else "JC", space) if space == "PC" else M


def make_generator(spec: GeneratorSpec, profile: ConventionProfile | None = None,
                   space: str | None = None) -> GroupOperator:
    """The operator of one generator, embedded into ``space`` if requested."""
    native = NATIVE_SPACE[spec.family]
    space = space or native
    if SPACE_DIM[space] < SPACE_DIM[native] or (native == "JC" and space == "J"):
        raise ValueError(f"{spec.family} does not act on {space}")
    if spec.family in CALIBRATED_FAMILIES and not np.any(spec.param):
        warnings.warn(f"{spec.family}{spec.k} with zero parameter is the identity",
                      ZeroParameterWarning)
    return GroupOperator(generator_matrix(spec, space, profile), space,
                         subgroup_label(spec.k, space), (spec,))


def identity(space: str, claim: str | None = None) -> GroupOperator:
    M = np.eye(SPACE_DIM[space])
    if space != "J":
        M = M.astype(complex)
    return GroupOperator(M, space, claim or group_of(space), ())


def word_matrix(word, space: str) -> np.ndarray:
    """``g_m ... g_1`` for ``word = (g_1, ..., g_m)`` (``g_1`` is applied first)."""
    M = np.eye(SPACE_DIM[space], dtype=float if space == "J" else complex)
    for g in word:
        M = generator_matrix(g, space) @ M
    return M


def word_operator(word, space: str, claim: str | None = None) -> GroupOperator:
    return GroupOperator(word_matrix(word, space), space, claim or group_of(space), tuple(word))


# -- membership ---------------------------------------------------------------

_PROBE_SEED = 20240521


@lru_cache(maxsize=None)
def _probes(space: str, n_random: int):
    rng = np.random.default_rng(_PROBE_SEED)
    if space == "PC":
        fixed = [F.ONE_DOT, F.point(J.E(1)), F.point(Y=J.E(2)), F.point(xi=1.0)]
        As = rng.normal(size=(n_random, 27)) + 1j * rng.normal(size=(n_random, 27))
        As *= 0.5
        rand = [F.rank_one_point(A) for A in As]
        pts = np.array(fixed + rand)
        return pts / F.norm(pts)[:, None]
    real = space == "J"
    fixed = [J.E(1), J.E(2), J.E(3), J.IDENTITY_ELEMENT]
    X = rng.normal(size=(n_random, 27))
    Y = rng.normal(size=(n_random, 27))
    if not real:
        X = X + 1j * rng.normal(size=(n_random, 27))
        Y = Y + 1j * rng.normal(size=(n_random, 27))
    X = np.concatenate([np.array(fixed), X])
    Y = np.concatenate([np.roll(np.array(fixed), 1, axis=0), Y])
    X = X / J.norm(X)[:, None]
    Y = Y / J.norm(Y)[:, None]
    return X, Y


def membership_residual(op: GroupOperator, claim: str | None = None, n_random: int = 50) -> dict:
    """Max residual of the defining equations of ``claim`` on a probe set.

    F4: ``a(X x Y) = aX x aY`` and realness.  E6: ``aX x aY = tau a tau (X x Y)``
    and ``<aX, aY> = <X, Y>``.  E7 (partial): ``<aP, aQ> = <P, Q>`` and the
    seventeen rank-one identities on rank-one probes.  ``Spin_k``: in
    addition ``a E_k = E_k`` (k-th idempotent) or, for ``Spin_k(12)``,
    ``a kappa_k = kappa_k a`` and ``a mu_k = mu_k a`` in operator norm.
    """
    claim = claim or op.claim
    M = op.matrix
    out = {}
    space = op.space
    if space in ("J", "JC"):
        X, Y = _probes("J" if space == "J" else "JC", n_random)
        AX, AY = X @ M.T, Y @ M.T
        if space == "J":
            out["real"] = float(np.abs(np.imag(M)).max()) if np.iscomplexobj(M) else 0.0
            lhs = J.cross(AX, AY)
            rhs = J.cross(X, Y) @ M.T
            out["cross"] = float(np.max(J.norm(lhs - rhs)))
        else:
            lhs = J.cross(AX, AY)
            rhs = J.cross(X, Y) @ np.conj(M).T
            out["cross"] = float(np.max(J.norm(lhs - rhs)))
        W = np.diag(J.WEIGHTS)
        out["unitary"] = float(np.abs(np.conj(M).T @ W @ M - W).max())
        if claim.startswith("Spin"):
            k = int(claim[4])
            out["fixes_E"] = float(J.norm(M @ J.E(k) - J.E(k)))
    else:
        W = np.diag(F.WEIGHTS)
        out["unitary"] = float(np.abs(np.conj(M).T @ W @ M - W).max())
        P = _probes("PC", n_random)
        AP = P @ M.T
        out["rank_one"] = float(np.max(F.rank1_residuals(AP)))
        if claim.startswith("Spin"):
            k = int(claim[4])
            K, Mu = _kappa_mu(k)
            out["kappa"] = float(np.linalg.norm(M @ K - K @ M, 2))
            out["mu"] = float(np.linalg.norm(M @ Mu - Mu @ M, 2))
    out["max"] = max(out.values())
    return out


@lru_cache(maxsize=None)
def _kappa_mu(k: int):
    return F.kappa_matrix(k), F.mu_matrix(k)


def is_member(op: GroupOperator, claim: str | None = None, tol: float = 1e-8) -> bool:
    return membership_residual(op, claim)["max"] <= tol
