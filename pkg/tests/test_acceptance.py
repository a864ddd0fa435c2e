"""The ten acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (visible even with output capture
on) and asserts both the verdict and the runtime limit.
"""
import pytest

from linkagelab import acceptance

# seconds allowed per criterion
LIMITS = {1: 1, 2: 120, 3: 30, 4: 600, 5: 300, 6: 300, 7: 300, 8: 600, 9: 300, 10: 120}


@pytest.mark.parametrize("fn", acceptance.CRITERIA, ids=lambda f: f.__name__)
def test_criterion(fn, capsys):
    result = fn()
    line = result.line()
    within = result.seconds < LIMITS[result.number]
    if not within:
        line += f" [over the {LIMITS[result.number]}s limit]"
    with capsys.disabled():
        print("\n" + line)
    assert result.passed, line
    assert within, line


def test_structure_details():
    r = acceptance.criterion_1()
    assert r.detail["vertices"] == {lev: 2 * 2 ** lev * lev for lev in range(1, 9)}


def test_grid_bounds_detail():
    r = acceptance.criterion_3()
    assert r.detail["bounds"] == {2: "1/3", 3: "1/3", 4: "2/3", 5: "2/3", 6: "1"}


def test_random_sanity_detail():
    r = acceptance.criterion_9(trials=40)
    assert r.detail["p=1"] == "50/50"
    assert r.detail["p=0"] == "0/50"
    lo, hi = r.detail["k=24,p=0.5,r=4"]["wilson95"]
    assert 0 <= lo <= hi <= 1
