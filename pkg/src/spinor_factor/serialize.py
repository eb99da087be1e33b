"""Versioned JSON for operators, factor sequences and traces.

Floats are written with Python's shortest round-trip repr, so reading a file
back gives bit-identical arrays.  Files are written atomically (temporary
file in the target directory, then ``os.replace``).
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from . import freudenthal as F
from . import jordan as J
from .decompose import CaseTrace, Factor, FactorSequence
from .generators import GeneratorSpec, GroupOperator

OPERATOR_SCHEMA = "spinor-factor/operator/v1"
FACTORS_SCHEMA = "spinor-factor/factors/v1"
BASIS = {"J": J.BASIS_VERSION, "JC": J.BASIS_VERSION, "PC": F.BASIS_VERSION}


class SchemaError(ValueError):
    pass


def matrix_to_json(M) -> dict:
    M = np.asarray(M)
    out = {"shape": list(M.shape), "re": np.real(M).tolist()}
    if np.iscomplexobj(M):
        out["im"] = np.imag(M).tolist()
    return out


def matrix_from_json(d) -> np.ndarray:
    re = np.array(d["re"], dtype=float)
    M = re + 1j * np.array(d["im"], dtype=float) if "im" in d else re
    if list(M.shape) != list(d["shape"]):
        raise SchemaError(f"matrix shape {M.shape} does not match {d['shape']}")
    return M


def word_to_json(word):
    return None if word is None else [g.to_json() for g in word]


def word_from_json(data):
    return None if data is None else tuple(GeneratorSpec.from_json(g) for g in data)


def operator_to_json(op: GroupOperator) -> dict:
    return {"schema": OPERATOR_SCHEMA, "space": op.space, "basis_version": BASIS[op.space],
            "claim": op.claim, "provenance": op.provenance, "word": word_to_json(op.word),
            "matrix": matrix_to_json(op.matrix)}


def _expect(d, schema):
    if not isinstance(d, dict) or d.get("schema") != schema:
        found = d.get("schema") if isinstance(d, dict) else type(d).__name__
        raise SchemaError(f"expected schema {schema!r}, found {found!r}")


def operator_from_json(d) -> GroupOperator:
    _expect(d, OPERATOR_SCHEMA)
    space = d["space"]
    if d.get("basis_version") != BASIS.get(space):
        raise SchemaError(f"basis version {d.get('basis_version')!r} is not supported for {space}")
    return GroupOperator(matrix_from_json(d["matrix"]), space, d["claim"],
                         word_from_json(d.get("word")), d.get("provenance", "file"))


def factors_to_json(seq: FactorSequence) -> dict:
    return {
        "schema": FACTORS_SCHEMA,
        "group": seq.group,
        "factors": [{"label": f.label, "word": word_to_json(f.operator.word),
                     "operator": operator_to_json(f.operator)} for f in seq.factors],
        "trace": seq.trace.to_json() if seq.trace is not None else None,
    }


def factors_from_json(d) -> FactorSequence:
    _expect(d, FACTORS_SCHEMA)
    factors = [Factor(f["label"], operator_from_json(f["operator"])) for f in d["factors"]]
    trace = None
    if d.get("trace"):
        t = d["trace"]
        trace = CaseTrace(labels=list(t["labels"]), thresholds=dict(t["thresholds"]),
                          residuals=[tuple(r) for r in t["residuals"]],
                          decisions=t["decisions"], retries=t["retries"],
                          impossible_hits=list(t["impossible_hits"]),
                          max_rank_one=t["max_rank_one"])
    return FactorSequence(d["group"], factors, trace)


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    """Write ``obj`` to ``path`` atomically."""
    text = dumps(obj)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.chmod(tmp, 0o666 & ~_umask())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _umask() -> int:
    current = os.umask(0)
    os.umask(current)
    return current


def read_json(path):
    with open(path) as fh:
        return json.load(fh)
