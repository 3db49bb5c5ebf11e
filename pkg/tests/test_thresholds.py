from fractions import Fraction as F

import pytest

from persuasion import thresholds
from persuasion.errors import InvalidParams
from persuasion.thresholds import ALWAYS, INTERVAL, NEVER

GRID = [F(k, 10) for k in range(1, 10)]


def test_canonical_values(canon):
    assert thresholds.p1(canon) == F(63, 71)
    assert thresholds.p2(canon) == F(111, 110)
    assert thresholds.p3(canon) == F(128, 191)
    assert thresholds.p4(canon) == F(139, 310)


def test_classification(canon):
    kinds = thresholds.threshold_set(canon).classification()
    assert kinds == {"p1": INTERVAL, "p2": ALWAYS, "p3": INTERVAL, "p4": NEVER}


def test_comparison_flags():
    assert thresholds.persuades("p1", F(1, 2), F(1, 2))
    assert not thresholds.persuades("p3", F(1, 2), F(1, 2))


def test_perfect_ai_comprehension_drops_terms(canon):
    # with p_ai = 1 every (1 - p_ai) term vanishes and p1 collapses to 1
    assert thresholds.p1(canon.with_(p_ai=F(1))) == 1


def test_p2_above_one_when_ai_skill_high(canon):
    bound = thresholds.p2_above_one_bound(canon)
    assert bound == F(11, 14)
    assert canon.p_ai > bound and thresholds.p2(canon) > 1


def test_p2_equals_p1_with_perfect_attention(canon):
    p = canon.with_(pi_doc=F(1))
    assert thresholds.p1(p) == thresholds.p2(p)


def test_hallucination_limit(canon):
    near = canon.with_(phi_ai=1 - F(1, 10**9))
    a, b, c = (thresholds.FORMULAS[n](near) for n in ("p1_prime", "p1_dprime", "p2_prime"))
    assert abs(b - thresholds.p1(canon)) < F(1, 10**6)
    assert abs(c - thresholds.p2(canon)) < F(1, 10**6)
    assert thresholds.FORMULAS["p1_dprime"](canon) == thresholds.p1(canon)


def test_hallucination_thresholds_need_phi_below_one(canon, halluc):
    with pytest.raises(InvalidParams):
        thresholds.hallucination_thresholds(canon)
    a, b, c = thresholds.hallucination_thresholds(halluc)
    assert c > b


def test_p1_family_requires_no_hallucination(halluc):
    with pytest.raises(InvalidParams):
        thresholds.p1(halluc)
    ts = thresholds.threshold_set(halluc)
    assert ts.p1_prime is not None and ts.p1 == thresholds.p1(halluc.with_(phi_ai=F(1)))


def test_curve_shape_and_gaps(canon):
    p = canon.with_(p_doc=F(1))
    curve = thresholds.threshold_curve(p, GRID)
    assert len(curve) == 9
    for _, ts in curve.grid:
        assert ts.ordered
    gap12 = [b - a for a, b in zip(curve.column("p1"), curve.column("p2"))]
    assert all(y < x for x, y in zip(gap12, gap12[1:]))
    rows = [(pi, ts) for pi, ts in curve.grid if thresholds.in_reversal_region(p.with_(pi_doc=pi))]
    gap34 = [ts.p3 - ts.p4 for _, ts in rows]
    assert all(y < x for x, y in zip(gap34, gap34[1:]))


def test_single_point_curve(canon):
    assert len(thresholds.threshold_curve(canon, [F(1, 2)])) == 1


def test_curve_rejects_invalid_points(canon):
    with pytest.raises(InvalidParams) as info:
        thresholds.threshold_curve(canon, GRID)
    assert "1/10" in str(info.value) and "1/5" in str(info.value)
    with pytest.raises(InvalidParams):
        thresholds.threshold_curve(canon, [F(1, 2), F(1, 2)])


def test_reversal_region_matches_p4_at_least_half(canon):
    for pi_ai in (F(3, 10), F(3, 5), F(9, 10)):
        for p_ai in (F(4, 5), F(19, 20)):
            p = canon.with_(pi_ai=pi_ai, p_ai=p_ai)
            assert thresholds.in_reversal_region(p) == (thresholds.FORMULAS["p4"](p) >= F(1, 2))


def test_slopes_exact_stencil(canon):
    s = thresholds.slope("p2", canon) - thresholds.slope("p1", canon)
    assert isinstance(s, F) and s < 0
    edge = canon.with_(pi_doc=F(1))
    assert thresholds.finite_difference(thresholds.FORMULAS["p1"], edge) == \
        (thresholds.FORMULAS["p1"](edge) - thresholds.FORMULAS["p1"](edge.with_(pi_doc=1 - F(1, 10**4)))) * 10**4
