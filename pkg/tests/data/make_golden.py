"""Regenerate the frozen test data.

octonion_table.json comes from a nested-pair Cayley-Dickson product written
here without numpy, so it does not share code with the library.
f4_seed42_n20.json is a regression snapshot of the sampler.
"""

import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))


def cd_conj(x):
    if isinstance(x, float):
        return x
    a, b = x
    return (cd_conj(a), neg(b))


def neg(x):
    if isinstance(x, float):
        return -x
    return (neg(x[0]), neg(x[1]))


def add(x, y):
    if isinstance(x, float):
        return x + y
    return (add(x[0], y[0]), add(x[1], y[1]))


def mul(x, y):
    """(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))."""
    if isinstance(x, float):
        return x * y
    a, b = x
    c, d = y
    return (add(mul(a, c), neg(mul(cd_conj(d), b))), add(mul(d, a), mul(b, cd_conj(c))))


def nest(v):
    if len(v) == 1:
        return float(v[0])
    h = len(v) // 2
    return (nest(v[:h]), nest(v[h:]))


def flat(x):
    if isinstance(x, float):
        return [x]
    return flat(x[0]) + flat(x[1])


def octonion_table():
    e = [[1.0 if i == j else 0.0 for j in range(8)] for i in range(8)]
    return [[flat(mul(nest(e[i]), nest(e[j]))) for j in range(8)] for i in range(8)]


def main():
    with open(os.path.join(HERE, "octonion_table.json"), "w") as fh:
        json.dump({"schema": "spinor-factor/test-octonion-table/v1",
                   "rule": "(a,b)(c,d) = (ac - conj(d) b, da + b conj(c))",
                   "table": octonion_table()}, fh, indent=1)
    if "--snapshot" in sys.argv:
        from spinor_factor import serialize
        from spinor_factor.sampling import SampleConfig, sample_group_element
        op = sample_group_element(SampleConfig("f4", 20, 42))
        serialize.write_json(os.path.join(HERE, "f4_seed42_n20.json"),
                             serialize.operator_to_json(op))


if __name__ == "__main__":
    main()
