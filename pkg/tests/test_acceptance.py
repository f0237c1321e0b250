"""Acceptance gate: one test per criterion, each printing its pass/fail line."""
import pytest

from pgo import checks
from pgo.padic import PadicContext

P5 = PadicContext(5)


@pytest.mark.parametrize("number", sorted(checks.TITLES), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number, capsys, fixture_dir):
    result = checks.run_criterion(number, P5, seed=0, other_prime=13, fixture_dir=fixture_dir)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
