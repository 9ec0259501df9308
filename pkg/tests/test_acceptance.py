"""Acceptance criteria 1-9, exact arithmetic, one report line per criterion."""

import pytest

from gwtaut.selftest import CRITERIA

REPORT: list = []


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"criterion_{c.number}")
def test_criterion(criterion):
    result = criterion()
    REPORT.append(result.line())
    print(result.line())
    assert result.passed, result.detail
    assert result.seconds < result.limit, f"took {result.seconds:.1f}s, limit {result.limit}s"
