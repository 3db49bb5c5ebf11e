from fractions import Fraction as F

import pytest

from persuasion import thresholds, verify
from persuasion.model import canonical_params


@pytest.fixture(scope="module")
def report():
    return verify.run_suite()


def test_default_suite_passes(report):
    assert report["ok"], verify.first_failure(report)
    assert report["grid_points"] >= 100
    assert report["hallucination_points"] > 0
    assert report["elapsed_seconds"] < 60
    assert set(verify.POINT_CHECKS) <= set(report["checks"])
    assert set(verify.GLOBAL_CHECKS) <= set(report["checks"])


def test_grid_reaches_reversal_region():
    grid = verify.default_grid()
    inside = [p for p in grid if thresholds.in_reversal_region(p)]
    assert 0 < len(inside) < len(grid)


def test_advisory_scan_is_reported_not_counted(report):
    scan = report["advisory"]["freeride_draws_all_costs"]
    assert scan["holds"] is False and scan["counterexamples"]
    assert report["ok"]


def test_single_point():
    out = verify.run_suite([canonical_params()], [], include_global=False)
    assert out["ok"] and out["grid_points"] == 1


def test_corrupted_threshold_is_caught(monkeypatch):
    real = thresholds.p1
    monkeypatch.setattr(thresholds, "p1", lambda p: real(p) + F(1, 10**6))
    out = verify.run_suite([canonical_params()], [], include_global=False)
    assert not out["ok"]
    bad = verify.first_failure(out)
    assert bad["check"] in out["checks"] and "params" in bad
