"""Acceptance battery: every gate criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see one line per
criterion; the CLI subcommand ``chainlab reproduce`` executes the same
checks.
"""

import pytest

from chainlab.acceptance import CRITERIA, Battery, run_criterion


@pytest.fixture(scope="module")
def battery():
    return Battery()


@pytest.mark.parametrize("cid,name", [(c, n) for c, n, _ in CRITERIA],
                         ids=[f"criterion_{c:02d}" for c, _, _ in CRITERIA])
def test_criterion(cid, name, battery):
    result = run_criterion(cid, battery)
    print(result.line())
    assert result.passed, result.line()
