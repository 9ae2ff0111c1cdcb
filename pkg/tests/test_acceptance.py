"""The twelve acceptance criteria, one test each.

Each test prints a single PASS/FAIL line with every measured value next to
its tolerance; the lines are repeated in the pytest terminal summary.  Run
this file directly to print the lines without pytest.
"""

import time

import pytest

from mkdv_ist import verify

HEAVY = {4, 5, 6, 7, 8}


def _criterion(cid):
    marks = [pytest.mark.slow] if cid in HEAVY else []
    return pytest.param(cid, id=f"criterion-{cid:02d}", marks=marks)


@pytest.mark.parametrize("cid", [_criterion(c) for c in verify.CRITERIA])
def test_criterion(cid, acceptance_log):
    t0 = time.perf_counter()
    res = verify.CRITERIA[cid]()
    line = f"{res.line()} [{time.perf_counter() - t0:.1f}s]"
    print(line)
    acceptance_log(line)
    assert res.passed, line


if __name__ == "__main__":
    for cid, fn in verify.CRITERIA.items():
        t0 = time.perf_counter()
        print(f"{fn().line()} [{time.perf_counter() - t0:.1f}s]", flush=True)
