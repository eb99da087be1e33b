"""The nine acceptance checks, runnable from pytest and from ``spinor-factor selftest``.

Each check returns a :class:`CheckResult` with the worst residuals it saw.
``quick=True`` shrinks the sample counts for a fast smoke run; the
tolerances never change.
"""

from __future__ import annotations

import time
import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import algebra as A
from . import classical as C
from . import decompose as D
from . import freudenthal as F
from . import generators as G
from . import jordan as J
from .sampling import SampleConfig, sample_group_element


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)
    elapsed: float = 0.0
    limit: float | None = None
    notes: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        worst = ", ".join(f"{k}={_fmt(v)}" for k, v in self.metrics.items())
        limit = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{status}] {self.number}. {self.name}: {worst}; {self.elapsed:.2f}s{limit}"


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def _timed(number, name, limit):
    def wrap(fn):
        def run(quick: bool = False) -> CheckResult:
            t0 = time.perf_counter()
            res = fn(quick)
            res.number, res.name, res.limit = number, name, limit
            res.elapsed = time.perf_counter() - t0
            if limit is not None and not quick and res.elapsed > limit:
                res.passed = False
                res.notes.append(f"runtime {res.elapsed:.1f}s exceeds {limit}s")
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _result(passed, **metrics):
    return CheckResult(0, "", bool(passed), metrics)


@_timed(1, "octonion composition laws", 1.0)
def check_octonions(quick=False):
    """|ab| = |a||b| and both alternative laws on random pairs; one associator is nonzero."""
    n = 1000 if quick else 10_000
    rng = np.random.default_rng(1)
    a, b = rng.standard_normal((2, n, 8))
    ab = A.omul(a, b)
    comp = np.abs(A.norm(ab) - A.norm(a) * A.norm(b)).max()
    left = np.abs(A.omul(A.omul(a, a), b) - A.omul(a, ab)).max()
    right = np.abs(A.omul(ab, b) - A.omul(a, A.omul(b, b))).max()
    e = np.eye(8)
    assoc = A.norm(A.omul(A.omul(e[1], e[2]), e[4]) - A.omul(e[1], A.omul(e[2], e[4])))
    ok = max(comp, left, right) <= 1e-12 and assoc > 1.0
    return _result(ok, composition=float(comp), alternative=float(max(left, right)),
                   associator=float(assoc))


@_timed(2, "SO(3), SU(3), Sp(3) three-factor split", 5.0)
def check_classical(quick=False):
    n = 100 if quick else 1000
    rng = np.random.default_rng(2)
    worst_fix = worst_rec = 0.0
    for group, ring in C.GROUP_RING.items():
        for _ in range(n):
            Amat = C.sample(group, rng)
            rep = C.verify_factors(Amat, C.decompose_classical(Amat, ring))
            worst_fix = max(worst_fix, rep["A1_fixes_e1"], rep["A2_fixes_e2"],
                            rep["A1p_fixes_e1"], rep["membership"])
            worst_rec = max(worst_rec, rep["reconstruction"])
    return _result(worst_fix <= 1e-12 and worst_rec <= 1e-10,
                   subgroup=worst_fix, reconstruction=worst_rec)


@_timed(3, "generator convention calibration", 30.0)
def check_calibration(quick=False):
    unique = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for fam in G.CALIBRATED_FAMILIES:
            G.calibrate(fam)
            unique[fam] = G.calibration_report(fam)["survivors"]
        try:
            G.calibrate("alpha", vector_sign=-1)
            negative_rejected = False
        except G.NoProfileSatisfies:
            negative_rejected = True
    ok = all(len(s) == 1 for s in unique.values()) and negative_rejected
    profiles = "/".join(f"{f}:{','.join(s)}" for f, s in unique.items())
    return _result(ok, profiles=profiles, negative_control_rejected=negative_rejected)


def eps1_closed_form(theta, P):
    """Component formula for eps1, written independently of the generator code.

    ``theta`` is taken as a Python complex, the same normalisation a
    generator parameter gets, so powers of it round identically.
    """
    theta = complex(theta)
    X, Y, xi, eta = (np.array(p, dtype=complex) for p in F.parts(P))
    (a, x), (b, y) = J.split(X), J.split(Y)
    a, x, b, y = a.copy(), x.copy(), b.copy(), y.copy()
    a[0] *= theta ** -2
    x[1] *= theta ** -1
    x[2] *= theta ** -1
    b[0] *= theta ** 2
    y[1] *= theta
    y[2] *= theta
    return F.point(J.join(a, x), J.join(b, y), theta ** 2 * xi, theta ** -2 * eta)


def eps2_closed_form(t, X):
    a, x = J.split(np.array(X, dtype=complex))
    a, x = a.copy(), x.copy()
    a[0] *= np.exp(1j * t)
    a[2] *= np.exp(-1j * t)
    x[0] *= np.exp(-0.5j * t)
    x[2] *= np.exp(0.5j * t)
    return J.join(a, x)


def kappa1_closed_form(P):
    X, Y, xi, eta = F.parts(P)
    (a, x), (b, y) = J.split(X), J.split(Y)
    z = np.zeros(8, dtype=complex)
    Xn = J.join([-a[0], a[1], a[2]], [x[0], z, z])
    Yn = J.join([b[0], -b[1], -b[2]], [-y[0], z, z])
    return F.point(Xn, Yn, -xi, eta)


def mu1_closed_form(P):
    X, Y, xi, eta = F.parts(P)
    (a, x), (b, y) = J.split(X), J.split(Y)
    z = np.zeros(8, dtype=complex)
    Xn = J.join([eta, b[2], b[1]], [-y[0], z, z])
    Yn = J.join([xi, a[2], a[1]], [-x[0], z, z])
    return F.point(Xn, Yn, b[0], a[0])


@_timed(4, "closed-form generators, one-parameter laws, kappa1/mu1", None)
def check_generator_laws(quick=False):
    rng = np.random.default_rng(4)
    basis56 = np.concatenate([np.eye(56), 1j * np.eye(56)]).astype(complex)
    basis27 = np.concatenate([np.eye(27), 1j * np.eye(27)]).astype(complex)
    exact = True
    for _ in range(5):
        t = rng.uniform(-np.pi, np.pi)
        theta = np.exp(1j * rng.uniform(-np.pi, np.pi))
        M1 = G.generator_matrix(G.GeneratorSpec("eps1", 1, theta), "PC")
        M2 = G.generator_matrix(G.GeneratorSpec("eps2", 2, t), "JC")
        exact &= all(np.array_equal(M1 @ v, eps1_closed_form(theta, v)) for v in basis56)
        exact &= all(np.array_equal(M2 @ v, eps2_closed_form(t, v)) for v in basis27)
    law = 0.0
    for fam in G.FAMILIES:
        space = "PC" if fam in ("gamma", "delta", "eps1") else "JC"
        for k in (1, 2, 3):
            if fam in G.CALIBRATED_FAMILIES:
                d = rng.standard_normal(8)
                d /= np.linalg.norm(d)
                s, u = rng.uniform(-2, 2, 2)
                p, q, r = s * d, u * d, (s + u) * d
            elif fam == "eps1":
                s, u = rng.uniform(-np.pi, np.pi, 2)
                p, q, r = np.exp(1j * s), np.exp(1j * u), np.exp(1j * (s + u))
            else:
                s, u = rng.uniform(-np.pi, np.pi, 2)
                p, q, r = s, u, s + u

            def g(x, fam=fam, k=k, space=space):
                return G.generator_matrix(G.GeneratorSpec(fam, k, x), space)
            law = max(law, float(np.abs(g(p) @ g(q) - g(r)).max()))
            zero = 0.0 if fam != "eps1" else 1.0
            law = max(law, float(np.abs(g(zero) - np.eye(g(zero).shape[0])).max()))
    K, Mu = F.kappa_matrix(1), F.mu_matrix(1)
    km = max(max(float(np.abs(K @ v - kappa1_closed_form(v)).max()),
                 float(np.abs(Mu @ v - mu1_closed_form(v)).max())) for v in basis56)
    ok = exact and law <= 1e-10 and km <= 1e-14
    return _result(ok, eps_exact=bool(exact), group_law=law, kappa_mu=km)


def _decompose_many(group, n, seed0=0):
    worst = Counter()
    paths = Counter()
    impossible = 0
    retries = 0
    labels_ok = True
    fix_E = 0.0
    for seed in range(seed0, seed0 + n):
        alpha = sample_group_element(SampleConfig(group, 20, seed))
        seq = D.decompose(alpha, group)
        rep = D.verify_decomposition(alpha, seq)
        labels_ok &= rep["shape_ok"]
        worst["reconstruction"] = max(worst["reconstruction"], rep["reconstruction"])
        worst["membership"] = max(worst["membership"], rep["membership_max"])
        if group == "e7":
            worst["kappa_mu"] = max([worst["kappa_mu"]] + [max(d["kappa"], d["mu"])
                                                           for d in rep["membership_detail"]])
        else:
            for f in seq.factors:
                k = int(f.label[4])
                fix_E = max(fix_E, float(J.norm(f.operator.matrix @ J.E(k) - J.E(k))))
        impossible += len(seq.trace.impossible_hits)
        retries += seq.trace.retries
        paths[seq.trace.path.split(" > E6[")[0]] += 1
    out = dict(worst)
    if group != "e7":
        out["fixes_E"] = fix_E
    out.update(labels_ok=bool(labels_ok), impossible=impossible, retries=retries)
    return out, paths


@_timed(5, "F4 = Spin1(9) Spin2(9) Spin1(9)", 60.0)
def check_f4(quick=False):
    m, paths = _decompose_many("f4", 100 if quick else 1000)
    ok = m["labels_ok"] and m["fixes_E"] <= 1e-8 and m["reconstruction"] <= 1e-7 \
        and m["membership"] <= 1e-8
    return _result(ok, **m)


@_timed(6, "E6 = Spin1(10) Spin2(10) Spin1(10)", 60.0)
def check_e6(quick=False):
    m, paths = _decompose_many("e6", 50 if quick else 500)
    ok = m["labels_ok"] and m["membership"] <= 1e-8 and m["reconstruction"] <= 1e-7
    return _result(ok, **m)


@_timed(7, "E7 = Spin1(12) Spin2(12) Spin1(12) Spin2(12) Spin1(12)", 300.0)
def check_e7(quick=False):
    m, paths = _decompose_many("e7", 30 if quick else 300)
    ok = m["labels_ok"] and m["kappa_mu"] <= 1e-7 and m["membership"] <= 1e-7 \
        and m["reconstruction"] <= 1e-6 and m["impossible"] == 0
    res = _result(ok, **m)
    res.notes.append("case paths: " + "; ".join(f"{c} x {p}" for p, c in paths.most_common()))
    return res


@_timed(8, "rank-one identities on the unit orbit", None)
def check_rank_one(quick=False):
    n = 50 if quick else 500
    worst = 0.0
    for seed in range(n):
        alpha = sample_group_element(SampleConfig("e7", 20, 10_000 + seed))
        worst = max(worst, float(F.rank1_residuals(alpha.matrix @ F.ONE_DOT).max()))
    counter = F.rank1_residuals(F.point(J.IDENTITY_ELEMENT))
    ok = worst <= 1e-9 and counter[1] == 1.0
    return _result(ok, worst=worst, counterexample_identity2=float(counter[1]))


def _mask(slots):
    m = np.zeros(56, dtype=bool)
    for s in slots:
        m[s] = True
    return m


def _jslots(*names):
    """Flat indices (within a 27-block) for names like 'xi2' or 'x1'."""
    out = []
    for n in names:
        if n.startswith("xi"):
            out.append(int(n[2]) - 1)
        else:
            s = 3 + 8 * (int(n[1]) - 1)
            out.extend(range(s, s + 8))
    return out


SUBSPACES_PC = {
    "<P>1": _mask(_jslots("xi1") + [27 + i for i in _jslots("xi2", "xi3", "x1")] + [F.XI]),
    "<P>1'": _mask(_jslots("xi2", "xi3", "x1") + [27 + i for i in _jslots("xi1")] + [F.ETA]),
    "<P>1''": _mask(_jslots("x2", "x3") + [27 + i for i in _jslots("x2", "x3")]),
}
SUBSPACES_JC = {
    "(xi; x1, 0, 0)": np.isin(np.arange(27), _jslots("xi1", "xi2", "xi3", "x1")),
    "(0; 0, x2, x3)": np.isin(np.arange(27), _jslots("x2", "x3")),
}


def leakage(M, mask, rng, n=20):
    """Largest out-of-subspace component of ``M v`` over random unit ``v`` in the subspace."""
    dim = M.shape[0]
    worst = 0.0
    for _ in range(n):
        v = np.zeros(dim, dtype=complex)
        v[mask] = rng.standard_normal(mask.sum()) + 1j * rng.standard_normal(mask.sum())
        v /= np.linalg.norm(v)
        worst = max(worst, float(np.linalg.norm((M @ v)[~mask])))
    return worst


@_timed(9, "invariant subspaces of the index-1 generators", None)
def check_invariant_subspaces(quick=False):
    rng = np.random.default_rng(9)
    trials = 3 if quick else 10
    worst = 0.0
    for _ in range(trials):
        for fam in G.CALIBRATED_FAMILIES + ("eps1",):
            if fam == "eps1":
                spec = G.GeneratorSpec(fam, 1, np.exp(1j * rng.uniform(-np.pi, np.pi)))
            else:
                d = rng.standard_normal(8)
                spec = G.GeneratorSpec(fam, 1, rng.uniform(0.1, np.pi) * d / np.linalg.norm(d))
            M = G.generator_matrix(spec, "PC")
            for mask in SUBSPACES_PC.values():
                worst = max(worst, leakage(M, mask, rng))
            if fam in ("alpha", "beta"):
                MJ = G.generator_matrix(spec, "JC")
                for mask in SUBSPACES_JC.values():
                    worst = max(worst, leakage(MJ, mask[:27], rng))
    return _result(worst <= 1e-10, leakage=worst)


CHECKS = (check_octonions, check_classical, check_calibration, check_generator_laws,
          check_f4, check_e6, check_e7, check_rank_one, check_invariant_subspaces)


def run_all(quick: bool = False, only=None):
    out = []
    for i, check in enumerate(CHECKS, start=1):
        if only and i not in only:
            continue
        try:
            out.append(check(quick))
        except Exception as exc:  # a crash is a failure of that check, not of the run
            out.append(CheckResult(i, check.__name__, False, {"error": f"{type(exc).__name__}: {exc}"}))
    return out
