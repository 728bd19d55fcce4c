"""Acceptance gate: one test per verification suite.

Each suite is the same code path exercised by `longedge verify --suite
<name>`; a test prints the suite's per-check report (one pass/fail line
per criterion with its pinned tolerance) and asserts the overall verdict.
Run with `pytest -v -s tests/test_acceptance.py` to see the reports.
"""

import pytest

from longedge.cli import ACCEPTANCE_SUITES


@pytest.mark.parametrize("name", list(ACCEPTANCE_SUITES), ids=list(ACCEPTANCE_SUITES))
def test_acceptance(name):
    result = ACCEPTANCE_SUITES[name]()
    print()
    print(result.report())
    assert result.passed, f"suite {name!r} failed:\n{result.report()}"
