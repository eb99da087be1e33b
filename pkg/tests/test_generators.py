import json
import warnings

import numpy as np
import pytest

from spinor_factor import freudenthal as F
from spinor_factor import generators as G
from spinor_factor import jordan as J
from spinor_factor.generators import GeneratorSpec


def random_param(family, rng):
    if family in G.CALIBRATED_FAMILIES:
        d = rng.standard_normal(8)
        return rng.uniform(0.1, np.pi) * d / np.linalg.norm(d)
    if family == "eps1":
        return np.exp(1j * rng.uniform(-np.pi, np.pi))
    return rng.uniform(-np.pi, np.pi)


SPACES = {"alpha": ("J", "JC", "PC"), "beta": ("JC", "PC"), "eps2": ("JC", "PC"),
          "gamma": ("PC",), "delta": ("PC",), "eps1": ("PC",)}


@pytest.mark.parametrize("family", G.FAMILIES)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_generators_lie_in_their_spin_subgroup(family, k, rng):
    spec = GeneratorSpec(family, k, random_param(family, rng))
    for space in SPACES[family]:
        op = G.make_generator(spec, space=space)
        assert op.claim == G.subgroup_label(k, space)
        res = G.membership_residual(op, n_random=10)
        assert res["max"] < 1e-12, res


def test_spin_claim_fails_for_the_wrong_index(rng):
    op = G.make_generator(GeneratorSpec("alpha", 1, random_param("alpha", rng)))
    assert G.membership_residual(op, "Spin2(9)")["fixes_E"] > 1e-3
    op = G.make_generator(GeneratorSpec("gamma", 1, random_param("gamma", rng)))
    assert G.membership_residual(op, "Spin2(12)")["max"] > 1e-3


def test_non_member_is_detected():
    M = np.eye(27)
    M[0, 0] = 2.0
    assert not G.is_member(G.GroupOperator(M, "J", "F4", None, "test"))


def test_spec_normalisation_and_json_round_trip():
    spec = GeneratorSpec("beta", 2, 0.5)
    assert spec.param == (0.5,) + (0.0,) * 7
    for s in (spec, GeneratorSpec("eps1", 1, 1j), GeneratorSpec("eps2", 3, -0.25)):
        assert GeneratorSpec.from_json(json.loads(json.dumps(s.to_json()))) == s
    with pytest.raises(ValueError):
        GeneratorSpec("zeta", 1, 0.0)
    with pytest.raises(ValueError):
        GeneratorSpec("alpha", 4, 0.0)


def test_inverse_and_shift(rng):
    spec = GeneratorSpec("delta", 1, random_param("delta", rng))
    M = G.generator_matrix(spec, "PC")
    assert np.allclose(G.generator_matrix(spec.inverse(), "PC") @ M, np.eye(56), atol=1e-12)
    assert spec.shifted(1).k == 2 and spec.shifted(2).k == 3 and spec.shifted(3).k == 1
    S = F.shift_matrix(1)
    assert np.allclose(G.generator_matrix(spec.shifted(1), "PC"), S @ M @ S.T, atol=1e-13)


def test_zero_parameter_warns():
    with pytest.warns(G.ZeroParameterWarning):
        op = G.make_generator(GeneratorSpec("alpha", 1, np.zeros(8)))
    assert np.array_equal(op.matrix, np.eye(27))


def test_word_convention_is_application_order(rng):
    a = GeneratorSpec("alpha", 1, random_param("alpha", rng))
    b = GeneratorSpec("beta", 2, random_param("beta", rng))
    Ma, Mb = G.generator_matrix(a, "JC"), G.generator_matrix(b, "JC")
    assert np.allclose(G.word_matrix((a, b), "JC"), Mb @ Ma)
    A, B = G.make_generator(a, space="JC"), G.make_generator(b, space="JC")
    assert (B @ A).word == (a, b)
    assert np.allclose((B @ A).matrix, Mb @ Ma)
    inv = (B @ A).inverse()
    assert np.allclose(inv.matrix @ (B @ A).matrix, np.eye(27), atol=1e-12)
    assert G.inverse_word((a, b)) == (b.inverse(), a.inverse())


def test_space_mismatch_is_rejected():
    with pytest.raises(ValueError):
        G.identity("J") @ G.identity("JC")
    with pytest.raises(ValueError):
        G.make_generator(GeneratorSpec("gamma", 1, 0.3), space="JC")


def test_embeddings_preserve_membership(rng):
    spec = GeneratorSpec("alpha", 2, random_param("alpha", rng))
    op = G.make_generator(spec)
    e6 = G.embed(op, "JC", check=True)
    e7 = G.embed(e6, "PC", check=True)
    assert e6.claim == "Spin2(10)" and e7.claim == "Spin2(12)"
    assert np.allclose(e7.matrix, G.generator_matrix(spec, "PC"))
    assert np.allclose(e7.matrix @ F.ONE_DOT, F.ONE_DOT)


def test_e6_elements_act_on_y_through_complex_conjugation(rng):
    spec = GeneratorSpec("beta", 1, random_param("beta", rng))
    M = G.generator_matrix(spec, "JC")
    P = G.generator_matrix(spec, "PC")
    assert np.allclose(P[27:54, 27:54], np.conj(M))


def test_calibration_picks_one_profile_per_family():
    with warnings.catch_warnings():
        warnings.simplefilter("error", RuntimeWarning)   # several survivors would warn
        for fam in G.CALIBRATED_FAMILIES:
            assert G.calibrate(fam).bits() == "01001"


def test_alpha_negative_control_is_rejected():
    with pytest.raises(G.NoProfileSatisfies):
        G.calibrate("alpha", vector_sign=-1)


def test_closed_forms_need_no_calibration():
    with pytest.raises(ValueError):
        G.calibrate("eps1")


def test_calibration_cache_round_trip(tmp_path, monkeypatch):
    path = tmp_path / "cal.json"
    G.calibrate_all(str(path))
    data = json.loads(path.read_text())
    assert data["schema"] == "spinor-factor/calibration/v1"
    assert set(data["families"]) == set(G.CALIBRATED_FAMILIES)
    saved = dict(G._PROFILES)
    try:
        G._PROFILES.clear()
        monkeypatch.setenv(G.CALIBRATION_ENV, str(path))
        monkeypatch.setattr(G, "AUTO_CALIBRATE", False)
        assert G.profile_for("gamma").bits() == "01001"
    finally:
        G._PROFILES.clear()
        G._PROFILES.update(saved)


def test_missing_profile_raises_without_auto_calibration(monkeypatch):
    saved = dict(G._PROFILES)
    try:
        G._PROFILES.clear()
        monkeypatch.delenv(G.CALIBRATION_ENV, raising=False)
        monkeypatch.setattr(G, "AUTO_CALIBRATE", False)
        with pytest.raises(G.UncalibratedFamily):
            G.profile_for("alpha")
    finally:
        G._PROFILES.clear()
        G._PROFILES.update(saved)


def test_generator_matrices_are_read_only(rng):
    M = G.generator_matrix(GeneratorSpec("alpha", 1, random_param("alpha", rng)))
    with pytest.raises(ValueError):
        M[0, 0] = 3.0


def test_alpha_quarter_turn_clears_x1_when_diagonal_is_balanced(rng):
    x = rng.standard_normal((3, 8))
    X = J.element([0.3, 0.7, 0.7], x)
    a = np.pi * x[0] / (4 * np.linalg.norm(x[0]))
    out = G.generator_matrix(GeneratorSpec("alpha", 1, a)) @ X
    assert np.linalg.norm(out[3:11]) < 1e-12
