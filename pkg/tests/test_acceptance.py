"""Acceptance gate: every advertised criterion must pass at its stated
budget.  Run with -s to see the one-line verdicts as they land."""

import pytest

from fandec.selftest import CRITERION_NAMES, run_criterion


@pytest.mark.parametrize("name", CRITERION_NAMES)
def test_acceptance_criterion(name):
    result = run_criterion(name)
    status = "PASS" if result.passed else "FAIL"
    print(f"[acceptance] {result.name}: {status} ({result.seconds:.2f}s) {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"
