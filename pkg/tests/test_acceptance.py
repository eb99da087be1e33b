"""The nine acceptance criteria at full size and stated tolerances.

Each test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary so they show up without ``-s``.
"""

from spinor_factor import acceptance

RESULTS = []

def _run(check):
    res = check(quick=False)
    line = res.line()
    print(line)
    for note in res.notes:
        print("      " + note)
    RESULTS.append(res)
    assert res.passed, line + " " + "; ".join(res.notes)

def test_octonion_composition_laws():
    _run(acceptance.check_octonions)

def test_classical_three_factor_split():
    _run(acceptance.check_classical)

def test_generator_calibration_unique_with_negative_control():
    _run(acceptance.check_calibration)

def test_closed_forms_group_laws_and_kappa_mu():
    _run(acceptance.check_generator_laws)

def test_f4_factorisation():
    _run(acceptance.check_f4)

def test_e6_factorisation():
    _run(acceptance.check_e6)

def test_e7_factorisation():
    _run(acceptance.check_e7)

def test_rank_one_identities():
    _run(acceptance.check_rank_one)

def test_invariant_subspaces():
    _run(acceptance.check_invariant_subspaces)
