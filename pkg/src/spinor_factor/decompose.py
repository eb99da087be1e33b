"""Reduction algorithms factoring F4, E6 and E7 elements into spinor subgroups.

Each reduction drives a distinguished point back to its base point with
generators of two (E6, F4) or three (E7) index segments:

* F4 and E6: ``alpha E1`` is brought to ``E1`` by a word ``W = W2 W1`` with
  ``W1`` in ``Spin_1`` and ``W2`` in ``Spin_2``; then
  ``alpha = W1^-1 . W2^-1 . (W2 W1 alpha)`` and the last factor fixes ``E1``.
* E7: ``alpha 1dot`` is brought to ``1dot`` by ``W = W1' W2 W1``; the
  remainder ``beta = W alpha`` fixes ``1dot`` and so lies in E6, where the E6
  reduction splits it further.  Adjacent factors with the same index are
  merged to give the five-factor shape.

Words are tuples of :class:`~spinor_factor.generators.GeneratorSpec` in the
order they are applied.

Branching on "this coordinate vanishes" uses a relative threshold
``EPS_CASE``; when a branch leads to a failed step or a final residual that
is too large the run is repeated with the sibling branch at the least
certain decision.
"""

from __future__ import annotations

import cmath
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import freudenthal as F
from . import generators as G
from . import jordan as J
from .algebra import norm as onorm
from .algebra import omul, oconj, orthogonal_direction, unit
from .generators import GeneratorSpec, GroupOperator

log = logging.getLogger(__name__)

EPS_CASE = 1e-7      # relative size below which a coordinate counts as zero for branching
NEGLIGIBLE = 1e-13   # relative size below which a zeroing step is skipped
STEP_TOL = 1e-9      # relative residual a zeroing step must reach
MAX_ATTEMPTS = 24

E0 = unit(0)
HALF_TURN = np.pi / 2 * E0


class DecompositionError(RuntimeError):
    pass


class NotInGroup(DecompositionError):
    pass


class NotRankOne(DecompositionError):
    pass


class NotUnitTrace(DecompositionError):
    pass


class PreconditionViolated(DecompositionError):
    pass


class NormNotOne(PreconditionViolated):
    pass


class ReductionStalled(DecompositionError):
    pass


class ImpossibleCaseReached(DecompositionError):
    pass


class BothComponentsZero(ImpossibleCaseReached):
    pass


class VerificationFailed(DecompositionError):
    pass


# -- results ------------------------------------------------------------------

@dataclass
class CaseTrace:
    labels: list = field(default_factory=list)
    thresholds: dict = field(default_factory=lambda: {
        "eps_case": EPS_CASE, "negligible": NEGLIGIBLE, "step_tol": STEP_TOL})
    residuals: list = field(default_factory=list)
    decisions: list = field(default_factory=list)
    retries: int = 0
    impossible_hits: list = field(default_factory=list)
    max_rank_one: float = 0.0
    wall_time: float = 0.0

    @property
    def path(self) -> str:
        return " > ".join(self.labels) if self.labels else "trivial"

    def to_json(self, timing: bool = False):
        """JSON form; wall time is left out unless ``timing`` so outputs stay reproducible."""
        out = {"schema": "spinor-factor/trace/v1", "labels": list(self.labels),
                "path": self.path, "thresholds": dict(self.thresholds),
                "residuals": [[lab, float(v)] for lab, v in self.residuals],
                "decisions": self.decisions, "retries": self.retries,
                "impossible_hits": list(self.impossible_hits),
                "max_rank_one": float(self.max_rank_one)}
        if timing:
            out["wall_time"] = self.wall_time
        return out


@dataclass
class Factor:
    label: str
    operator: GroupOperator

    @property
    def word(self):
        return self.operator.word


@dataclass
class FactorSequence:
    group: str
    factors: list
    trace: CaseTrace | None = None

    @property
    def labels(self):
        return [f.label for f in self.factors]

    def product(self) -> np.ndarray:
        M = np.eye(self.factors[0].operator.dim, dtype=self.factors[0].operator.matrix.dtype)
        for f in self.factors:
            M = M @ f.operator.matrix
        return M

    def __len__(self):
        return len(self.factors)


SHAPES = {
    "F4": ["Spin1(9)", "Spin2(9)", "Spin1(9)"],
    "E6": ["Spin1(10)", "Spin2(10)", "Spin1(10)"],
    "E7": ["Spin1(12)", "Spin2(12)", "Spin1(12)", "Spin2(12)", "Spin1(12)"],
}
SPACE = {"F4": "J", "E6": "JC", "E7": "PC"}


# -- the reduction state ------------------------------------------------------

def _local(V, k, space):
    """Coordinates seen by the index-``k`` generators as if they had index 1."""
    if k == 1:
        return V
    return F.shift(V, 1 - k) if space == "PC" else J.shift(V, 1 - k)


def _gen(family, param, k=1):
    return GeneratorSpec(family, k, param)


@dataclass
class _Option:
    label: str
    zero: tuple = ()
    nonzero: tuple = ()
    impossible: bool = False


class _Run:
    """One attempt at a reduction: current vector, applied steps and decisions."""

    def __init__(self, v, space, forced=None, trace=None, eps_case=EPS_CASE):
        self.space = space
        self.eps_case = eps_case
        self.v = np.array(v, dtype=float if space == "J" else complex)
        self.scale = float(np.sqrt(np.sum(np.abs(self.v) ** 2))) or 1.0
        self.steps = []
        self.forced = forced or {}
        self.decisions = []
        self.labels = []
        self.residuals = []
        self.trace = trace
        self.max_rank_one = 0.0

    def local(self, k, V=None):
        return _local(self.v if V is None else V, k, self.space)

    def small(self, value, rel=NEGLIGIBLE):
        return float(np.sqrt(np.sum(np.abs(value) ** 2))) <= rel * self.scale

    def _rank_one(self):
        if self.space == "PC":
            r = float(np.max(F.rank1_residuals(self.v)))
        else:
            r = float(J.norm(J.sharp(self.v)))
        self.max_rank_one = max(self.max_rank_one, r)

    def apply(self, spec):
        self.v = G.generator_matrix(spec, self.space) @ self.v
        self.steps.append(spec)
        self._rank_one()

    def step(self, k, candidates, target, label):
        """Apply the first candidate (index-1 form) whose result makes ``target`` vanish."""
        best = np.inf
        for spec in candidates:
            spec = spec.shifted(k - 1)
            w = G.generator_matrix(spec, self.space) @ self.v
            val = float(target(w))
            best = min(best, val)
            if val <= STEP_TOL * self.scale:
                self.v = w
                self.steps.append(spec)
                self.residuals.append((label, val))
                self._rank_one()
                return
        raise ReductionStalled(f"{label}: best residual {best:.3g}")

    def decide(self, point, values, options):
        """Choose the case whose zero pattern best matches ``values``.

        The cost of an option adds, on a log10 scale, how far each value it
        assumes zero lies above the threshold and how far each value it
        assumes nonzero lies below it.
        """
        thr = self.eps_case * self.scale
        mags = {k: float(np.sqrt(np.sum(np.abs(v) ** 2))) for k, v in values.items()}

        def excess(m):
            return np.log10(max(m, 1e-300) / thr)

        costs = []
        for opt in options:
            c = sum(max(0.0, excess(mags[q])) for q in opt.zero)
            c += sum(max(0.0, -excess(mags[q])) for q in opt.nonzero)
            costs.append(c)
        order = sorted(range(len(options)), key=lambda i: (costs[i], i))
        idx = len(self.decisions)
        chosen = self.forced.get(idx, order[0])
        margin = costs[order[1]] - costs[order[0]] if len(order) > 1 else np.inf
        self.decisions.append({"point": point, "chosen": options[chosen].label,
                               "index": chosen, "order": order, "margin": float(margin),
                               "values": mags})
        opt = options[chosen]
        self.labels.append(opt.label)
        if opt.impossible:
            raise ImpossibleCaseReached(f"{point}: reached {opt.label}")
        return opt.label


def _run_with_retry(v0, space, body, finish, trace: CaseTrace, eps_case: float = EPS_CASE):
    """Run ``body`` and ``finish``; on failure revisit the least certain decisions."""
    t0 = time.perf_counter()
    trace.thresholds["eps_case"] = eps_case
    queue = [{}]
    seen = set()
    errors = []
    attempts = 0
    while queue and attempts < MAX_ATTEMPTS:
        forced = queue.pop(0)
        key = tuple(sorted(forced.items()))
        if key in seen:
            continue
        seen.add(key)
        attempts += 1
        run = _Run(v0, space, forced, eps_case=eps_case)
        try:
            body(run)
            result = finish(run)
        except DecompositionError as exc:
            errors.append(f"{type(exc).__name__}: {exc}")
            if isinstance(exc, ImpossibleCaseReached):
                trace.impossible_hits.append(" > ".join(run.labels))
            log.debug("attempt %d failed: %s", attempts, exc)
            # alternatives, least certain decision first
            ranked = sorted(range(len(run.decisions)), key=lambda i: run.decisions[i]["margin"])
            for i in ranked:
                d = run.decisions[i]
                prefix = {j: run.decisions[j]["index"] for j in range(i)}
                for alt in d["order"]:
                    if alt != d["index"]:
                        queue.append({**prefix, i: alt})
            continue
        trace.labels = run.labels
        trace.residuals = run.residuals
        trace.decisions = [{**{k: v for k, v in d.items() if k != "order"},
                            "margin": d["margin"] if np.isfinite(d["margin"]) else None}
                           for d in run.decisions]
        trace.retries = attempts - 1
        trace.max_rank_one = run.max_rank_one
        trace.wall_time = time.perf_counter() - t0
        return run, result
    raise VerificationFailed("; ".join(errors[-4:]) or "no attempt succeeded")


# -- building blocks on J ------------------------------------------------------

def _oct(V, n, off=0):
    s = off + 3 + 8 * (n - 1)
    return V[s:s + 8]


def _block(run, k, which):
    """The Jordan element a routine inspects: X, or tau Y (on which E6 acts through tau b tau)."""
    def get(V):
        L = run.local(k, V)
        if which == "X":
            return L[:27]
        return np.conj(L[27:54])
    return get


def _clear_x1_real(run, k):
    """Real two-step move: equalise xi2, xi3 then rotate x1 into the diagonal."""
    get = _block(run, k, "X")
    x1 = _oct(get(run.v), 1)
    if run.small(x1):
        return
    a = orthogonal_direction(x1) * (np.pi / 4)
    run.step(k, [_gen("alpha", a), _gen("alpha", -a)],
             lambda V: abs(get(V)[1] - get(V)[2]), f"alpha{k}: xi2 = xi3")
    x1 = _oct(get(run.v), 1)
    if not run.small(x1):
        a = np.pi * x1.real / (4 * np.linalg.norm(x1))
        run.step(k, [_gen("alpha", a), _gen("alpha", -a)],
                 lambda V: onorm(_oct(get(V), 1)), f"alpha{k}: x1 -> 0")


def _clear_x1(run, k=1, which="X"):
    """Four moves with alpha/beta clearing x1 of ``(xi1, xi2, xi3; x1, 0, 0)``."""
    get = _block(run, k, which)
    x1 = _oct(get(run.v), 1)
    if run.small(x1):
        return
    a = orthogonal_direction(x1) * (np.pi / 4)
    run.step(k, [_gen("alpha", a), _gen("alpha", -a)],
             lambda V: abs(get(V)[1] - get(V)[2]), f"alpha{k}: xi2 = xi3")
    x1 = _oct(get(run.v), 1)
    b = orthogonal_direction(x1) * (np.pi / 4)
    run.step(k, [_gen("beta", b), _gen("beta", -b)],
             lambda V: abs(get(V)[1]) + abs(get(V)[2]), f"beta{k}: xi2 = xi3 = 0")
    q = _oct(get(run.v), 1).imag
    if not run.small(q):
        a = np.pi * q / (4 * np.linalg.norm(q))
        run.step(k, [_gen("alpha", a), _gen("alpha", -a)],
                 lambda V: onorm(_oct(get(V), 1).imag), f"alpha{k}: Im x1 -> 0")
    p = _oct(get(run.v), 1).real
    if not run.small(p):
        b = np.pi * p / (4 * np.linalg.norm(p))
        run.step(k, [_gen("beta", b), _gen("beta", -b)],
                 lambda V: onorm(_oct(get(V), 1)), f"beta{k}: x1 -> 0")


def _make_x3_real(run, k=1):
    """Make x3 real on ``(xi1, 0, 0; 0, x2, x3)`` by clearing the imaginary part's x3."""
    get = _block(run, k, "X")
    X = get(run.v)
    z2, z3 = _oct(X, 2).imag, _oct(X, 3).imag
    target = lambda V: onorm(_oct(get(V), 3).imag)  # noqa: E731
    if run.small(z3):
        return
    if run.small(z2):
        run.step(k, [_gen("alpha", HALF_TURN), _gen("alpha", -HALF_TURN)], target,
                 f"alpha{k}(pi/2): swap x2, x3")
        return
    n2, n3 = np.linalg.norm(z2), np.linalg.norm(z3)
    phi = np.arctan2(n3, -n2)              # cot(phi) = -|z2|/|z3|, phi in (0, pi)
    a = (phi / (n2 * n3)) * oconj(omul(z2, z3))
    mirrored = a * ((np.pi - phi) / phi)
    run.step(k, [_gen("alpha", a), _gen("alpha", -a), _gen("alpha", mirrored),
                 _gen("alpha", -mirrored)], target, f"alpha{k}(t conj(z2 z3)): z3 -> 0")


# -- F4 ------------------------------------------------------------------------

def _f4_body(run):
    if run.small(run.v - J.E(1)):
        return
    _clear_x1_real(run, 1)
    V = run.v
    case = run.decide("f4", {"xi2": V[1], "xi3": V[2]},
                      [_Option("I", zero=("xi2",)), _Option("II", zero=("xi3",), nonzero=("xi2",))])
    if case == "II":
        run.step(1, [_gen("alpha", HALF_TURN), _gen("alpha", -HALF_TURN)],
                 lambda V: abs(V[1]), "alpha1(pi/2): case II -> I")
    _clear_x1_real(run, 2)
    V = run.v
    case = run.decide("f4.final", {"xi1": V[0], "xi3": V[2]},
                      [_Option("xi3 = 0", zero=("xi3",), nonzero=("xi1",)),
                       _Option("xi1 = 0", zero=("xi1",), nonzero=("xi3",))])
    if case == "xi1 = 0":
        run.step(2, [_gen("alpha", HALF_TURN), _gen("alpha", -HALF_TURN)],
                 lambda V: abs(V[2]), "alpha2(pi/2): xi3 -> xi1")


def _target_residual(run, base, tol):
    res = float(np.sqrt(np.sum(np.abs(run.v - base) ** 2)))
    if res > tol:
        raise VerificationFailed(f"final residual {res:.3g} exceeds {tol:g}")
    run.residuals.append(("final", res))
    return res


def reduce_to_e1(X0, tol: float = 1e-8, trace: CaseTrace | None = None) -> tuple:
    """Word ``w`` of alpha_1 / alpha_2 moves with ``w(X0) = E1`` for a real rank-one ``X0`` of trace 1."""
    X0 = np.asarray(X0)
    if np.iscomplexobj(X0):
        if np.abs(X0.imag).max() > tol:
            raise PreconditionViolated("X0 must be real")
        X0 = X0.real
    ok, res = J.is_rank_one(X0, tol)
    if not ok:
        raise NotRankOne(f"||X x X|| = {res:.3g}")
    if abs(J.trace(X0) - 1.0) > tol:
        raise NotUnitTrace(f"tr X = {J.trace(X0):.6g}")
    trace = trace if trace is not None else CaseTrace()
    run, _ = _run_with_retry(X0, "J", _f4_body,
                             lambda r: _target_residual(r, J.E(1), tol), trace)
    return tuple(run.steps)


# -- E6 ------------------------------------------------------------------------

def _e6_finish(run):
    """``(xi1, 0, xi3; 0, 0, 0)`` with one of xi1, xi3 zero, to ``E1``."""
    V = run.v
    case = run.decide("e6.final", {"xi1": V[0], "xi3": V[2]},
                      [_Option("xi3 = 0", zero=("xi3",), nonzero=("xi1",)),
                       _Option("xi1 = 0", zero=("xi1",), nonzero=("xi3",))])
    if case == "xi1 = 0":
        run.step(2, [_gen("alpha", HALF_TURN), _gen("alpha", -HALF_TURN)],
                 lambda V: abs(V[2]), "alpha2(pi/2): xi3 -> xi1")
    t = -float(np.angle(run.v[0]))
    if abs(t) > NEGLIGIBLE:
        run.step(2, [_gen("eps2", t, 1), _gen("eps2", -t, 1)], lambda V: abs(V[0] - abs(V[0])), "eps2(t): phase")


def _e6_body(run):
    if run.small(run.v - J.E(1)):
        return
    _clear_x1(run, 1)
    V = run.v
    case = run.decide("e6", {"xi2": V[1], "xi3": V[2]},
                      [_Option("I", zero=("xi2",), nonzero=("xi3",)),
                       _Option("II", zero=("xi3",), nonzero=("xi2",)),
                       _Option("III", zero=("xi2", "xi3"))])
    if case == "II":
        run.step(1, [_gen("alpha", HALF_TURN), _gen("alpha", -HALF_TURN)],
                 lambda V: abs(V[1]), "alpha1(pi/2): case II -> I")
    elif case == "III":
        _make_x3_real(run, 1)
    _clear_x1(run, 2)
    _e6_finish(run)


def simplify_offdiagonal(X, variant: int = 1, tol: float = 1e-9) -> tuple:
    """Word of index-1 moves: variant 1 clears x1 of ``(xi1, xi2, xi3; x1, 0, 0)``;
    variant 2 makes x3 real on ``(xi1, 0, 0; 0, x2, x3)``."""
    X = np.asarray(X, dtype=complex)
    scale = max(float(J.norm(X)), 1.0)
    if variant == 1:
        bad = onorm(_oct(X, 2)) + onorm(_oct(X, 3))
        if bad > tol * scale:
            raise PreconditionViolated("variant 1 needs x2 = x3 = 0")
        run = _Run(X, "JC")
        _clear_x1(run, 1)
    elif variant == 2:
        bad = abs(X[1]) + abs(X[2]) + onorm(_oct(X, 1))
        if bad > tol * scale:
            raise PreconditionViolated("variant 2 needs xi2 = xi3 = 0 and x1 = 0")
        run = _Run(X, "JC")
        _make_x3_real(run, 1)
    else:
        raise ValueError("variant must be 1 or 2")
    return tuple(run.steps)


# -- E7 ------------------------------------------------------------------------

def _prime_coords(L):
    """Real-structure coordinates of the ``<P>1'`` part of a (local) point:
    ``d, s, x1[8], r1, r2`` with ``xi2, xi3 = d + i s, -d + i s`` and
    ``eta1, eta = r1 + i r2, r1 - i r2``."""
    xi2, xi3, eta1, eta = L[1], L[2], L[27], L[F.ETA]
    return np.concatenate([[(xi2 - xi3) / 2, (xi2 + xi3) / 2j], L[3:11],
                           [(eta1 + eta) / 2, (eta1 - eta) / 2j]])


_AXIS = {"alpha": 0, "beta": 1, "gamma": 10, "delta": 11}
_XS = slice(2, 10)


def _sweep(run, k, coords):
    """Rotate the 12 coordinates of ``<P>1'`` into the (r1, r2) plane.

    The real part is moved onto r1 and then the imaginary part onto
    (r1, r2).  Each move is one generator acting as a plane rotation
    between a scalar axis and an octonion direction of x1.
    """
    def rotate(family, part, direction, zero_axis, label):
        c = part(coords(run.v))
        vp = c[_AXIS[family]]
        along = float(direction @ c[_XS])
        theta = np.arctan2(-vp, along) if zero_axis else np.arctan2(along, vp)
        a = (theta / 2) * direction
        if zero_axis:
            target = lambda V: abs(part(coords(V))[_AXIS[family]])  # noqa: E731
        else:
            target = lambda V: np.linalg.norm(part(coords(V))[_XS])  # noqa: E731
        run.step(k, [_gen(family, a), _gen(family, -a)], target, label)

    for part, axes, closer, name in ((np.real, ("alpha", "beta", "delta"), "gamma", "Re"),
                                     (np.imag, ("alpha", "beta"), "delta", "Im")):
        x = part(coords(run.v))[_XS]
        direction = x / np.linalg.norm(x) if not run.small(x) else E0
        for fam in axes:
            if not run.small(part(coords(run.v))[_AXIS[fam]]):
                rotate(fam, part, direction, True, f"{fam}{k}: {name} {fam}-axis -> x1")
        x = part(coords(run.v))[_XS]
        if not run.small(x):
            rotate(closer, part, x / np.linalg.norm(x), False, f"{closer}{k}: {name} x1 -> axis")


def _pattern_body(run, k, variant):
    if variant == "standard":
        _sweep(run, k, lambda V: _prime_coords(run.local(k, V)))
        _clear_x1(run, k, "Y")
    elif variant == "caseIII":
        _sweep(run, k, lambda V: _prime_coords(F.mu(1, run.local(k, V))))
        _clear_x1(run, k, "X")
    else:
        raise ValueError("variant must be 'standard' or 'caseIII'")


_SPECIAL_MASK = np.zeros(56, dtype=bool)
_SPECIAL_MASK[[1, 2, 27, F.ETA]] = True
_SPECIAL_MASK[3:11] = True


def _check_special_pattern(P, k, tol):
    L = _local(P, k, "PC")
    off = float(np.linalg.norm(L[~_SPECIAL_MASK]))
    scale = float(np.linalg.norm(P)) or 1.0
    if off > tol * scale:
        raise PreconditionViolated(f"point is not in the special pattern (off-pattern {off:.3g})")


def _special_body(run, k, tol=1e-6):
    _check_special_pattern(run.v, k, tol)
    _pattern_body(run, k, "standard")
    L = run.local(k)
    case = run.decide(f"special({k})", {"eta1": L[27], "eta": L[F.ETA]},
                      [_Option("I", zero=("eta1",), nonzero=("eta",)),
                       _Option("II", zero=("eta",), nonzero=("eta1",)),
                       _Option("III", zero=("eta1", "eta"), impossible=True)])
    if case == "II":
        run.step(k, [_gen("gamma", HALF_TURN), _gen("gamma", -HALF_TURN)],
                 lambda V: abs(run.local(k, V)[27]), f"gamma{k}(pi/2): case II -> I")
    eta = complex(run.local(k)[F.ETA])
    unit_eta = eta / abs(eta)
    if abs(unit_eta - 1) > NEGLIGIBLE:
        # principal root; -1 - 0j is treated as -1 so that -1 gives exactly i
        theta = cmath.sqrt(complex(unit_eta.real, unit_eta.imag + 0.0))
        run.step(k, [_gen("eps1", theta)],
                 lambda V: abs(run.local(k, V)[F.ETA] - abs(eta)), f"eps1{k}(theta): theta^2 = eta")


def reduce_to_pattern(P, k: int = 1, variant: str = "standard") -> tuple:
    """Spin_k(12) word bringing ``P`` to the reduced zero pattern of its variant."""
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    run = _Run(P, "PC")
    _pattern_body(run, k, variant)
    return tuple(run.steps)


def special_to_unit_point(P, k: int = 1, tol: float = 1e-8) -> tuple:
    """Spin_k(12) word taking a rank-one unit point of the special pattern to ``1dot``."""
    P = np.asarray(P, dtype=complex)
    n2 = float(np.real(F.inner_P(P, P)))
    if abs(n2 - 1.0) > tol:
        raise NormNotOne(f"<P, P> = {n2:.6g}")
    if float(np.max(F.rank1_residuals(P))) > tol:
        raise NotRankOne("rank-one identities fail")
    _check_special_pattern(P, k, tol)
    trace = CaseTrace()

    def body(run):
        try:
            _special_body(run, k)
        except ImpossibleCaseReached as exc:
            raise BothComponentsZero(str(exc)) from exc
    run, _ = _run_with_retry(P, "PC", body, lambda r: _target_residual(r, F.ONE_DOT, tol), trace)
    return tuple(run.steps)


def _swap(run, k, family, target, label):
    run.step(k, [_gen(family, HALF_TURN), _gen(family, -HALF_TURN)], target, label)


def _case_IC(run):
    V = run.v
    case = run.decide("I.C", {"x2": _oct(V, 2), "x3": _oct(V, 3)},
                      [_Option("I.C.1", nonzero=("x2", "x3")),
                       _Option("I.C.2", zero=("x2",), nonzero=("x3",)),
                       _Option("I.C.3", zero=("x3",), nonzero=("x2",)),
                       _Option("I.C.4", zero=("x2", "x3"))])
    if case == "I.C.1":
        _make_x3_real(run, 1)
    elif case == "I.C.2":
        _swap(run, 1, "alpha", lambda V: onorm(_oct(V, 3)), "alpha1(pi/2): x3 -> x2")
    _special_body(run, 2)


def _case_I(run):
    V = run.v
    case = run.decide("I", {"eta2": V[28], "eta3": V[29]},
                      [_Option("I.A", zero=("eta2",), nonzero=("eta3",)),
                       _Option("I.B", zero=("eta3",), nonzero=("eta2",)),
                       _Option("I.C", zero=("eta2", "eta3"))])
    if case == "I.A":
        _swap(run, 1, "alpha", lambda V: abs(V[29]), "alpha1(pi/2): eta3 -> eta2")
        _special_body(run, 2)
    elif case == "I.B":
        _special_body(run, 2)
    else:
        _case_IC(run)


def _case_IIIC1(run):
    _pattern_body(run, 2, "standard")
    V = run.v
    case = run.decide("III.C.1", {"eta2": V[28], "eta": V[F.ETA]},
                      [_Option("III.C.1.1", zero=("eta2",), nonzero=("eta",)),
                       _Option("III.C.1.2", zero=("eta",), nonzero=("eta2",)),
                       _Option("III.C.1.3", zero=("eta2", "eta"), impossible=True)])
    if case == "III.C.1.2":
        run.step(2, [_gen("gamma", HALF_TURN), _gen("gamma", -HALF_TURN)],
                 lambda V: abs(V[28]), "gamma2(pi/2): III.C.1.2 -> III.C.1.1")
    V = run.v
    case = run.decide("III.C.1.1", {"eta1": V[27], "eta3": V[29]},
                      [_Option("III.C.1.1.1", zero=("eta1",), nonzero=("eta3",)),
                       _Option("III.C.1.1.2", zero=("eta3",), nonzero=("eta1",)),
                       _Option("III.C.1.1.3", zero=("eta1", "eta3"))])
    if case == "III.C.1.1.1":
        _swap(run, 2, "alpha", lambda V: abs(V[29]), "alpha2(pi/2): eta3 -> eta1")
    elif case == "III.C.1.1.3":
        V = run.v
        sub = run.decide("III.C.1.1.3", {"x1": _oct(V, 1), "x3": _oct(V, 3)},
                         [_Option("III.C.1.1.3.(i)", nonzero=("x1", "x3")),
                          _Option("III.C.1.1.3.(ii)", zero=("x1",), nonzero=("x3",)),
                          _Option("III.C.1.1.3.(iii)", zero=("x3",), nonzero=("x1",)),
                          _Option("III.C.1.1.3.(iv)", zero=("x1", "x3"))])
        if sub.endswith(".(i)"):
            _make_x3_real(run, 2)
        if sub.endswith((".(i)", ".(ii)")):
            _swap(run, 2, "alpha", lambda V: onorm(_oct(V, 3)), "alpha2(pi/2): x3 -> x1")
    _special_body(run, 1)


def _case_IIIC(run):
    V = run.v
    y = 27
    case = run.decide("III.C", {"x2": _oct(V, 2), "x3": _oct(V, 3),
                                "y2": _oct(V, 2, y), "y3": _oct(V, 3, y)},
                      [_Option("III.C.1", nonzero=("x2",)),
                       _Option("III.C.2", zero=("x2",), nonzero=("x3",)),
                       _Option("III.C.3", zero=("x2", "x3"), nonzero=("y3",)),
                       _Option("III.C.4", zero=("x2", "x3", "y3"), nonzero=("y2",)),
                       _Option("III.C.5", zero=("x2", "x3", "y2", "y3"), impossible=True)])
    if case != "III.C.1":
        run.labels.append("III.C.1")
    if case == "III.C.4":
        _swap(run, 1, "alpha", lambda V: onorm(_oct(V, 2, y)), "alpha1(pi/2): y2 -> y3")
        case = "III.C.3"
    if case == "III.C.3":
        _swap(run, 1, "gamma", lambda V: onorm(_oct(V, 3, y)), "gamma1(pi/2): y3 -> x2")
    elif case == "III.C.2":
        _swap(run, 1, "alpha", lambda V: onorm(_oct(V, 3)), "alpha1(pi/2): x3 -> x2")
    _case_IIIC1(run)


def _e7_body(run):
    if run.small(run.v - F.ONE_DOT):
        return
    _pattern_body(run, 1, "standard")
    V = run.v
    case = run.decide("e7", {"eta1": V[27], "eta": V[F.ETA]},
                      [_Option("I", zero=("eta1",), nonzero=("eta",)),
                       _Option("II", zero=("eta",), nonzero=("eta1",)),
                       _Option("III", zero=("eta1", "eta"))])
    if case == "II":
        run.step(1, [_gen("delta", HALF_TURN), _gen("delta", -HALF_TURN)],
                 lambda V: abs(V[27]), "delta1(pi/2): case II -> I")
    if case in ("I", "II"):
        _case_I(run)
        return
    _pattern_body(run, 1, "caseIII")
    V = run.v
    case = run.decide("III", {"xi1": V[0], "xi": V[F.XI]},
                      [_Option("III.A", zero=("xi1",), nonzero=("xi",)),
                       _Option("III.B", zero=("xi",), nonzero=("xi1",)),
                       _Option("III.C", zero=("xi1", "xi"))])
    if case == "III.A":
        run.step(1, [_gen("gamma", HALF_TURN), _gen("gamma", -HALF_TURN)],
                 lambda V: abs(V[F.XI]), "gamma1(pi/2): III.A -> I.C")
    if case in ("III.A", "III.B"):
        _case_IC(run)
    else:
        _case_IIIC(run)


# -- assembling factors ---------------------------------------------------------

def _segments(steps, pattern):
    """Split an applied word into consecutive runs matching the index ``pattern``."""
    out = [[] for _ in pattern]
    pos = 0
    for g in steps:
        while pos < len(pattern) and pattern[pos] != g.k:
            pos += 1
        if pos == len(pattern):
            raise VerificationFailed(f"word does not fit the index pattern {pattern}")
        out[pos].append(g)
    return [tuple(s) for s in out]


def _inverse_op(word, space, label):
    return G.word_operator(G.inverse_word(word), space, label)


def _check_input(alpha: GroupOperator, group: str, tol: float):
    space = SPACE[group]
    if alpha.space != space:
        raise NotInGroup(f"{group} acts on {space}, got an operator on {alpha.space}")
    if alpha.provenance == "generators" and alpha.word is not None:
        return
    res = G.membership_residual(alpha, group)["max"]
    if res > tol:
        raise NotInGroup(f"{group} membership residual {res:.3g} exceeds {tol:g}")


def _verify_factors(seq, alpha_matrix, tol_rec, tol_mem):
    rep = verify_decomposition(alpha_matrix, seq)
    if rep["reconstruction"] > tol_rec:
        raise VerificationFailed(f"reconstruction {rep['reconstruction']:.3g}")
    if rep["membership_max"] > tol_mem:
        raise VerificationFailed(f"factor membership {rep['membership_max']:.3g}")
    return rep


def _three_factor(alpha: GroupOperator, group: str, body, tol: float,
                  eps_case: float) -> FactorSequence:
    space = SPACE[group]
    labels = SHAPES[group]
    base = J.E(1)
    X0 = alpha.matrix @ base
    trace = CaseTrace()

    def finish(run):
        _target_residual(run, base, tol)
        w1, w2 = _segments(run.steps, (1, 2))
        W = G.word_matrix(run.steps, space)
        word = None if alpha.word is None else alpha.word + tuple(run.steps)
        last = GroupOperator(W @ alpha.matrix, space, labels[2], word,
                             "remainder" if word is None else "generators")
        seq = FactorSequence(group, [
            Factor(labels[0], _inverse_op(w1, space, labels[0])),
            Factor(labels[1], _inverse_op(w2, space, labels[1])),
            Factor(labels[2], last)], trace)
        _verify_factors(seq, alpha.matrix, 1e-7, tol)
        return seq

    _, seq = _run_with_retry(X0, space, body, finish, trace, eps_case)
    return seq


def decompose_f4(alpha: GroupOperator, tol: float = 1e-8,
                 eps_case: float = EPS_CASE) -> FactorSequence:
    """``alpha = a1 a2 a1'`` with ``a1, a1'`` in Spin1(9) and ``a2`` in Spin2(9)."""
    _check_input(alpha, "F4", tol)
    return _three_factor(alpha, "F4", _f4_body, tol, eps_case)


def decompose_e6(alpha: GroupOperator, tol: float = 1e-8,
                 eps_case: float = EPS_CASE) -> FactorSequence:
    """``alpha = a1 a2 a1'`` with ``a1, a1'`` in Spin1(10) and ``a2`` in Spin2(10)."""
    _check_input(alpha, "E6", tol)
    return _three_factor(alpha, "E6", _e6_body, tol, eps_case)


def decompose_e7(alpha: GroupOperator, tol: float = 1e-8,
                 eps_case: float = EPS_CASE) -> FactorSequence:
    """Five factors ``a1 a2 a1' a2' a1''`` alternating between Spin1(12) and Spin2(12)."""
    _check_input(alpha, "E7", tol)
    labels = SHAPES["E7"]
    P0 = alpha.matrix @ F.ONE_DOT
    trace = CaseTrace()

    def finish(run):
        _target_residual(run, F.ONE_DOT, tol)
        w1, w2, w1p = _segments(run.steps, (1, 2, 1))
        beta = G.word_matrix(run.steps, "PC") @ alpha.matrix
        B = beta[:27, :27]
        off = float(np.abs(beta - G.embed_matrix(B, "JC", "PC")).max())
        if off > tol:
            raise VerificationFailed(f"1dot-stabiliser is not an embedded E6 element ({off:.3g})")
        inner = decompose_e6(GroupOperator(B, "JC", "E6", None, "stabiliser"), tol, eps_case)
        v1, v2, v3 = (f.operator for f in inner.factors)
        third = _inverse_op(w1p, "PC", labels[2]) @ G.embed(v1, "PC")
        third.claim = labels[2]
        fourth = G.embed(v2, "PC")
        fourth.claim = labels[3]
        last = GroupOperator(G.embed_matrix(v3.matrix, "JC", "PC"), "PC", labels[4], None,
                             "remainder")
        seq = FactorSequence("E7", [
            Factor(labels[0], _inverse_op(w1, "PC", labels[0])),
            Factor(labels[1], _inverse_op(w2, "PC", labels[1])),
            Factor(labels[2], third),
            Factor(labels[3], fourth),
            Factor(labels[4], last)], trace)
        run.labels.append("E6[" + inner.trace.path + "]")
        _verify_factors(seq, alpha.matrix, 1e-6, max(tol, 1e-7))
        return seq

    _, seq = _run_with_retry(P0, "PC", _e7_body, finish, trace, eps_case)
    return seq


def decompose(alpha: GroupOperator, group: str, tol: float = 1e-8,
              eps_case: float = EPS_CASE) -> FactorSequence:
    """Dispatch on ``group`` (``f4``, ``e6`` or ``e7``, any case)."""
    fn = {"F4": decompose_f4, "E6": decompose_e6, "E7": decompose_e7}.get(group.upper())
    if fn is None:
        raise ValueError(f"unknown group {group!r}")
    return fn(alpha, tol, eps_case)


def verify_decomposition(alpha, seq: FactorSequence) -> dict:
    """Reconstruction residual (operator 2-norm), per-factor membership and label pattern."""
    A = alpha.matrix if isinstance(alpha, GroupOperator) else np.asarray(alpha)
    rec = float(np.linalg.norm(seq.product() - A, 2))
    detail = [G.membership_residual(f.operator, f.label) for f in seq.factors]
    members = [float(d["max"]) for d in detail]
    return {
        "reconstruction": rec,
        "membership": members,
        "membership_detail": detail,
        "membership_max": max(members) if members else 0.0,
        "labels": seq.labels,
        "shape_ok": seq.labels == SHAPES[seq.group],
    }
