"""Acceptance gate: every criterion at its stated tolerance.

Each criterion runs through its check in ``qpdiff.verification`` (the
same code behind ``qpdiff verify``) and prints one pass/fail line; the
test fails if the criterion failed or overran its runtime budget.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import pytest

from qpdiff import verification as vf

CRITERIA = [
    ("criterion_1_branch_identities", vf.check_branch_identities),
    ("criterion_2_sign_compatibility", vf.check_sign_compatibility),
    ("criterion_3_four_factor_reconstruction", vf.check_four_factor),
    ("criterion_4_decay_exponents", vf.check_decay),
    ("criterion_5_cauchy_oracles", vf.check_cauchy_oracles),
    ("criterion_6_compatibility_residual", vf.check_residual),
    ("criterion_7_diffraction_properties", vf.check_diffraction),
    ("criterion_8_performance", vf.check_performance),
    ("criterion_9_real_branch_regime", vf.check_real_branch),
]


@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_acceptance_criterion(name, check):
    result = check()
    status = "PASS" if result.passed else "FAIL"
    print(f"\n{status}  {result.name}  ({result.elapsed:.1f} s)  {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"
