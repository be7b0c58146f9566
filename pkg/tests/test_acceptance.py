"""Every acceptance criterion at its stated size, tolerance and time budget.

One ``[PASS]``/``[FAIL]`` line per criterion is printed in the terminal summary.
"""
import pytest

from epwkit import verify

RESULTS = []


@pytest.mark.parametrize("cid", sorted(verify.CRITERIA), ids=lambda c: f"criterion_{c:02d}")
def test_criterion(cid):
    r = verify.run(cid, "full")
    RESULTS.append(r)
    print(r.line("full"))
    assert r.passed, r.detail
    assert r.within_budget, f"{r.elapsed:.1f}s over the {r.budget}s budget"
