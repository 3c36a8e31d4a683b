"""One test per acceptance criterion; each prints its [PASS]/[FAIL] line.

Tolerances are pinned in ffcircle.acceptance.  A failing criterion is left
failing: the line and the detail rows say why.
"""

import json
import os

import pytest

from ffcircle.acceptance import CRITERIA

JOBS = int(os.environ.get("FFCIRCLE_JOBS", min(4, os.cpu_count() or 1)))


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    fn = CRITERIA[number]
    res = fn(jobs=JOBS, seed=0) if number == 8 else fn()
    with capsys.disabled():
        print()
        print(res.line())
        rows = res.detail.get("rows")
        if rows and not res.passed:
            for row in rows:
                print("    " + json.dumps(row))
    assert res.passed, res.line()
