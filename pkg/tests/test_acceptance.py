"""The acceptance battery as a pytest module: one test per criterion, each
printing its pass/fail line with the measured detail."""

import pytest

from heteroswitch.acceptance import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = CRITERIA[number]()
    line = (f"[{'PASS' if result.passed else 'FAIL'}] criterion {result.number}: "
            f"{result.name} -- {result.detail} ({result.elapsed:.1f}s)")
    with capsys.disabled():
        print(f"\n{line}")
    assert result.passed, line
