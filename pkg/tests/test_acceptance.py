"""One test per acceptance criterion, each at its stated tolerance.

Every test prints a single ``AC-n PASS/FAIL`` line with the measured values,
so ``pytest -v`` output doubles as the acceptance report.
"""
import pytest

from heartlab.acceptance import CHECKS


@pytest.mark.parametrize("criterion", sorted(CHECKS), ids=lambda c: f"AC-{c}")
def test_criterion(criterion, capsys):
    outcome = CHECKS[criterion]()
    with capsys.disabled():
        print("\n" + outcome.line())
    assert outcome.passed, outcome.detail
