"""``spinor-factor``: sample, decompose and verify exceptional group elements.

Exit codes: 0 success, 1 a verification or acceptance failure, 2 bad usage
or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import acceptance
from . import decompose as D
from . import generators as G
from . import serialize as S
from .sampling import GROUPS, SampleConfig, sample_group_element

EPILOG = """\
Random elements are products of generators.  Such products need not cover
each group evenly; the decompositions do not depend on that, they only
require members of the group.
"""

RECONSTRUCTION_TOL = {"f4": 1e-7, "e6": 1e-7, "e7": 1e-6}
MEMBERSHIP_TOL = {"f4": 1e-8, "e6": 1e-8, "e7": 1e-7}


class UsageError(Exception):
    pass


def _emit(obj, path):
    if path in (None, "-"):
        sys.stdout.write(S.dumps(obj))
    else:
        S.write_json(path, obj)


def _load(path):
    try:
        return S.read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_operator(path):
    try:
        op = S.operator_from_json(_load(path))
    except (S.SchemaError, KeyError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from exc
    if op.word is not None:
        # a stated word is only trusted if it reproduces the matrix
        if np.abs(G.word_matrix(op.word, op.space) - op.matrix).max() > 1e-9:
            op.word, op.provenance = None, "file"
    return op


def cmd_sample(args):
    cfg = SampleConfig(args.group, args.n, args.seed)
    _emit(S.operator_to_json(sample_group_element(cfg)), args.out)
    return 0


def cmd_decompose(args):
    op = _load_operator(args.input)
    group = args.group or {"J": "f4", "JC": "e6", "PC": "e7"}[op.space]
    try:
        seq = D.decompose(op, group, tol=args.tol)
    except D.NotInGroup as exc:
        raise UsageError(str(exc)) from exc
    except D.DecompositionError as exc:
        print(f"decomposition failed: {exc}", file=sys.stderr)
        return 1
    _emit(S.factors_to_json(seq), args.out)
    if args.trace:
        S.write_json(args.trace, seq.trace.to_json())
    print(f"{group}: {' '.join(seq.labels)}  path: {seq.trace.path}", file=sys.stderr)
    return 0


def cmd_verify(args):
    op = _load_operator(args.input)
    try:
        seq = S.factors_from_json(_load(args.factors))
    except (S.SchemaError, KeyError, ValueError) as exc:
        raise UsageError(f"{args.factors}: {exc}") from exc
    group = seq.group.lower()
    rep = D.verify_decomposition(op, seq)
    rec_tol = args.tol if args.tol is not None else RECONSTRUCTION_TOL[group]
    ok = (rep["reconstruction"] <= rec_tol and rep["membership_max"] <= MEMBERSHIP_TOL[group]
          and rep["shape_ok"])
    rep["passed"] = bool(ok)
    rep["tolerances"] = {"reconstruction": rec_tol, "membership": MEMBERSHIP_TOL[group]}
    _emit({"schema": "spinor-factor/verify/v1", **rep}, args.out)
    return 0 if ok else 1


def cmd_calibrate(args):
    path = args.out or os.environ.get(G.CALIBRATION_ENV) or "calibration.json"
    profiles = G.calibrate_all(path, seed=args.seed)
    for fam, prof in profiles.items():
        print(f"{fam}: {prof.bits()}")
    print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_selftest(args):
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError as exc:
            raise UsageError("--only takes comma-separated check numbers") from exc
    results = acceptance.run_all(quick=args.quick, only=only)
    for r in results:
        print(r.line())
        for note in r.notes:
            print(f"      {note}")
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    return 0 if passed == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinor-factor", description=__doc__.splitlines()[0],
                                epilog=EPILOG,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="draw a seeded random group element", epilog=EPILOG)
    s.add_argument("--group", required=True, choices=GROUPS)
    s.add_argument("--n", type=int, default=20, help="number of generators (default 20)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="output file (default stdout)")
    s.set_defaults(func=cmd_sample)

    d = sub.add_parser("decompose", help="factor an operator into spinor subgroups")
    d.add_argument("--group", choices=GROUPS, help="defaults to the group acting on the operator's space")
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--out", help="factor file (default stdout)")
    d.add_argument("--trace", help="also write the case trace here")
    d.add_argument("--tol", type=float, default=1e-8)
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="check a factor file against its operator")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--factors", required=True)
    v.add_argument("--tol", type=float, help="reconstruction tolerance (default per group)")
    v.add_argument("--out", help="report file (default stdout)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("calibrate", help="fix generator conventions and write the cache")
    c.add_argument("--out", help=f"cache path (default ${G.CALIBRATION_ENV} or ./calibration.json)")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_calibrate)

    t = sub.add_parser("selftest", help="run the acceptance checks")
    t.add_argument("--quick", action="store_true", help="smaller sample counts")
    t.add_argument("--only", help="comma-separated check numbers")
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"spinor-factor: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:  # bad argument values such as a negative --n
        print(f"spinor-factor: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
