import json
import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinor_factor import cli
from spinor_factor import decompose as D
from spinor_factor import generators as G
from spinor_factor import jordan as J
from spinor_factor import serialize as S
from spinor_factor.sampling import GROUPS, RunReport, SampleConfig, sample_group_element, sample_word


# -- sampling ------------------------------------------------------------------

@pytest.mark.parametrize("group", GROUPS)
def test_same_config_gives_identical_operator(group):
    a = sample_group_element(SampleConfig(group, 10, 99))
    b = sample_group_element(SampleConfig(group, 10, 99))
    assert np.array_equal(a.matrix, b.matrix) and a.word == b.word


@pytest.mark.parametrize("group", GROUPS)
def test_samples_are_members(group):
    op = sample_group_element(SampleConfig(group, 20, 5))
    assert G.membership_residual(op)["max"] <= 1e-9


def test_zero_length_is_identity():
    op = sample_group_element(SampleConfig("e7", 0, 1))
    assert np.array_equal(op.matrix, np.eye(56)) and op.word == ()


def test_single_alpha1_fixes_e1():
    for seed in range(50):
        word = sample_word(SampleConfig("f4", 1, seed))
        if word[0].k == 1:
            break
    op = sample_group_element(SampleConfig("f4", 1, seed))
    assert np.allclose(op.matrix @ J.E(1), J.E(1), atol=1e-14)


def test_families_per_group():
    fams = {g.family for s in range(20) for g in sample_word(SampleConfig("e6", 20, s))}
    assert fams == {"alpha", "beta", "eps2"}
    fams = {g.family for s in range(5) for g in sample_word(SampleConfig("f4", 20, s))}
    assert fams == {"alpha"}


def test_config_validation():
    with pytest.raises(ValueError):
        SampleConfig("g2")
    with pytest.raises(ValueError):
        SampleConfig("f4", -1)
    with pytest.raises(ValueError):
        SampleConfig("f4", 1, 2 ** 64)
    assert SampleConfig("F4").group == "f4"


def test_golden_f4_operator(data_dir):
    with open(os.path.join(data_dir, "f4_seed42_n20.json")) as fh:
        golden = S.operator_from_json(json.load(fh))
    op = sample_group_element(SampleConfig("f4", 20, 42))
    assert np.array_equal(op.matrix, golden.matrix)
    assert op.word == golden.word


def test_run_report_rejects_non_finite_residuals():
    cfg = SampleConfig("f4")
    assert RunReport(cfg, {"rec": 1e-15}).to_json()["schema"].startswith("spinor-factor/")
    with pytest.raises(ValueError):
        RunReport(cfg, {"rec": float("nan")})


# -- serialisation ---------------------------------------------------------------

@given(st.sampled_from(GROUPS), st.integers(0, 2 ** 63), st.integers(0, 6))
def test_operator_round_trip_is_exact(group, seed, n):
    op = sample_group_element(SampleConfig(group, n, seed))
    back = S.operator_from_json(json.loads(S.dumps(S.operator_to_json(op))))
    assert np.array_equal(back.matrix, op.matrix)
    assert back.matrix.dtype == op.matrix.dtype
    assert back.word == op.word and back.space == op.space and back.claim == op.claim


@pytest.mark.parametrize("group", GROUPS)
def test_factor_round_trip_is_exact(group):
    alpha = sample_group_element(SampleConfig(group, 8, 2))
    seq = D.decompose(alpha, group)
    back = S.factors_from_json(json.loads(S.dumps(S.factors_to_json(seq))))
    assert back.labels == seq.labels
    for f, g in zip(seq.factors, back.factors):
        assert np.array_equal(f.operator.matrix, g.operator.matrix)
        assert f.word == g.word
    assert back.trace.labels == seq.trace.labels


def test_schema_and_basis_are_checked():
    d = S.operator_to_json(G.identity("J"))
    with pytest.raises(S.SchemaError):
        S.operator_from_json({**d, "schema": "something/else"})
    with pytest.raises(S.SchemaError):
        S.operator_from_json({**d, "basis_version": "old"})
    with pytest.raises(S.SchemaError):
        S.factors_from_json(d)


def test_atomic_write_leaves_no_temporaries(tmp_path):
    path = tmp_path / "x.json"
    S.write_json(str(path), {"schema": "t", "v": 1})
    S.write_json(str(path), {"schema": "t", "v": 2})
    assert json.loads(path.read_text())["v"] == 2
    assert os.listdir(tmp_path) == ["x.json"]


# -- command line ----------------------------------------------------------------

def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pipeline_sample_decompose_verify(tmp_path, capsys):
    op, fac, tr = (str(tmp_path / n) for n in ("op.json", "f.json", "t.json"))
    assert run(["sample", "--group", "e7", "--n", "20", "--seed", "7", "--out", op], capsys)[0] == 0
    assert run(["decompose", "--group", "e7", "--in", op, "--out", fac, "--trace", tr],
               capsys)[0] == 0
    code, out, _ = run(["verify", "--in", op, "--factors", fac], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["reconstruction"] <= 1e-6
    assert json.load(open(tr))["schema"] == "spinor-factor/trace/v1"


def test_outputs_are_byte_identical(tmp_path, capsys):
    paths = []
    for i in range(2):
        op, fac = str(tmp_path / f"op{i}.json"), str(tmp_path / f"f{i}.json")
        run(["sample", "--group", "e6", "--seed", "3", "--out", op], capsys)
        run(["decompose", "--in", op, "--out", fac], capsys)
        paths.append((op, fac))
    for a, b in zip(*paths):
        assert open(a, "rb").read() == open(b, "rb").read()


def test_identity_decomposes_into_identities(tmp_path, capsys):
    ident = str(tmp_path / "identity.json")
    S.write_json(ident, S.operator_to_json(G.identity("J")))
    code, out, _ = run(["decompose", "--group", "f4", "--in", ident], capsys)
    factors = json.loads(out)["factors"]
    assert code == 0 and len(factors) == 3
    for f in factors:
        assert np.array_equal(S.matrix_from_json(f["operator"]["matrix"]), np.eye(27))


def test_tampered_factors_fail_verification(tmp_path, capsys):
    op, fac = str(tmp_path / "op.json"), str(tmp_path / "f.json")
    run(["sample", "--group", "f4", "--seed", "1", "--out", op], capsys)
    run(["decompose", "--in", op, "--out", fac], capsys)
    d = json.load(open(fac))
    d["factors"][0], d["factors"][1] = d["factors"][1], d["factors"][0]
    S.write_json(fac, d)
    assert run(["verify", "--in", op, "--factors", fac], capsys)[0] == 1


def test_usage_errors_exit_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["sample", "--group", "g2"])
    assert exc.value.code == 2
    assert run(["decompose", "--in", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["sample", "--group", "f4", "--n", "-3"], capsys)[0] == 2
    bad = str(tmp_path / "bad.json")
    M = np.eye(27)
    M[0, 0] = 2
    S.write_json(bad, S.operator_to_json(G.GroupOperator(M, "J", "F4", None, "test")))
    assert run(["decompose", "--in", bad], capsys)[0] == 2


def test_mismatched_word_is_not_trusted(tmp_path, capsys):
    path = str(tmp_path / "op.json")
    op = sample_group_element(SampleConfig("f4", 3, 0))
    d = S.operator_to_json(op)
    d["matrix"] = S.matrix_to_json(2 * np.eye(27))
    S.write_json(path, d)
    assert run(["decompose", "--in", path], capsys)[0] == 2


def test_calibrate_writes_cache(tmp_path, capsys):
    path = str(tmp_path / "cal.json")
    code, out, _ = run(["calibrate", "--out", path], capsys)
    assert code == 0 and "alpha: 01001" in out
    assert json.load(open(path))["schema"] == "spinor-factor/calibration/v1"


def test_selftest_quick_subset(capsys):
    code, out, _ = run(["selftest", "--quick", "--only", "1,4,9"], capsys)
    assert code == 0
    assert out.count("[PASS]") == 3


def test_help_mentions_sampler_coverage(capsys):
    with pytest.raises(SystemExit):
        cli.main(["sample", "--help"])
    assert "cover" in capsys.readouterr().out
