from fractions import Fraction as F

import pytest

from persuasion import freeride as fr
from persuasion.errors import InvalidParams, InvariantViolation
from persuasion.oracle import INTERPRETABLE, UNINTERPRETABLE


@pytest.fixture
def fp():
    return fr.canonical_freeride()


def test_reference_gains(fp):
    rep = fr.freeride_deltas(fp)
    assert rep.deltas == (F(2041, 23562), F(469, 7038), F(231, 2638), F(69, 862))
    assert (rep.mu, rep.eta) == (F(76, 77), F(19, 23))
    d1, d2, d3, d4 = rep.deltas
    assert d1 > d2 > 0 and d3 > d4 > 0
    assert F(1, 2) < rep.eta < rep.mu < 1


def test_closed_form_matches_enumeration(fp):
    assert fr.delta_formulas(fp.base) == fr.oracle_deltas(fp.base)
    for g, lam, pi_d, q_a, q_d in [(F(2, 5), F(3, 10), F(7, 10), F(19, 20), F(99, 100)),
                                   (F(1, 5), F(1, 10), F(3, 10), F(9, 10), F(49, 50))]:
        base = fp.base.with_(gamma=g, lam=lam, pi_doc=pi_d, p_ai=q_a, p_doc=q_d)
        fr.check_freeride(fr.FreerideParams(base, F(1, 20)))
        assert fr.delta_formulas(base) == fr.oracle_deltas(base)


def test_pooled_gains_are_mixtures(fp):
    w1, w2, w3, w4 = fr.mixture_weights(fp.base)
    assert w1 + w2 == 1 and w3 + w4 == 1
    assert fr.pooled_gains(fp.base) == (F(251, 3060), F(3, 35))


def test_cost_interval(fp):
    c1, c2, branch = fr.cost_interval(fp)
    assert (c1, c2, branch) == (F(469, 7038), F(69, 862), "delta2<delta4")
    assert fr.in_interval(fp) and not fr.in_interval(fp, c2)


def test_policies_inside_interval(fp):
    table = fr.draw_table(fp, fp.cost)
    assert table[INTERPRETABLE] == (True, False, True, True)
    assert table[UNINTERPRETABLE] == (True, True, True, True)
    assert fr.draw_probability(fp, UNINTERPRETABLE, fp.cost) > fr.draw_probability(fp, INTERPRETABLE, fp.cost)


def test_accuracy_gap_inside_interval():
    fp = fr.canonical_freeride(F(733, 10000))
    gap = fr.freeride_accuracy(fp, fp.cost, UNINTERPRETABLE) - fr.freeride_accuracy(fp, fp.cost, INTERPRETABLE)
    assert gap == F(469, 40000)


def test_baseline_and_small_cost(fp):
    top = max(fr.critical_costs(fp)) * 2
    base = fr.baseline_accuracy(fp)
    assert base == F(1681, 2000)
    for regime in (INTERPRETABLE, UNINTERPRETABLE):
        assert fr.freeride_accuracy(fp, top, regime) == base
        assert fr.freeride_accuracy(fp, F(1, 1000), regime) == F(3643, 4000)


def test_indifference_draws(fp):
    d2 = fr.delta_formulas(fp.base)[1]
    assert fr.draw_policy(fp, INTERPRETABLE, 2, d2)
    assert not fr.draw_policy(fp, INTERPRETABLE, 2, d2 + F(1, 10**9))


def test_uninterpretable_can_draw_less_above_pooled_gains(fp):
    # between the pooled gains and the largest case gain the interpretable doctor still buys in the
    # best cases while the pooled doctor buys nothing
    c = F(87, 1000)
    assert fr.draw_count(fp, UNINTERPRETABLE, c) == 0
    assert fr.draw_count(fp, INTERPRETABLE, c) == 1


def test_invalid_inputs(fp):
    with pytest.raises(InvalidParams):
        fr.check_freeride(fr.FreerideParams(fp.base.with_(pi_ai=F(1, 10)), F(1, 20)))
    with pytest.raises(InvalidParams):
        fr.check_freeride(fr.FreerideParams(fp.base, F(0)))
    with pytest.raises(InvalidParams):
        fr.check_freeride(fr.FreerideParams(fp.base.with_(p_ai=F(99, 100)), F(1, 20)))
    with pytest.raises(ValueError):
        fr.draw_policy(fp, INTERPRETABLE, 5)
    with pytest.raises(ValueError):
        fr.draw_policy(fp, "neither", 1)


def test_p_doc_at_p1_is_allowed(fp):
    from persuasion import thresholds
    edge = fp.base.with_(p_doc=thresholds.p1(fp.base))
    try:
        fr.freeride_deltas(fr.FreerideParams(edge, F(1, 20)))
    except InvalidParams as exc:
        # only the skill ordering may rule the edge out
        assert "p1" not in str(exc)


def test_corrupted_formula_is_caught(fp, monkeypatch):
    monkeypatch.setattr(fr, "delta_formulas", lambda p: (F(1), F(1), F(1), F(1)))
    with pytest.raises(InvariantViolation):
        fr.freeride_deltas(fp)
