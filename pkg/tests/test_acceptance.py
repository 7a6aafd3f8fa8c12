"""The ten acceptance criteria, one test each.

Each run prints a single PASS/FAIL line; the lines are also collected into the
terminal summary at the end of the session.
"""
import pytest

from khtorsion.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"criterion{c.number:02d}")
def test_criterion(criterion, acceptance_report):
    outcome = run_criterion(criterion, max_crossings=None)
    line = outcome.line()
    acceptance_report.append(line)
    print(line)
    assert outcome.status == "PASS", line
