from fractions import Fraction as F

import pytest

from persuasion import career
from persuasion.errors import InfeasibleConstruction, InvalidParams, InvariantViolation
from persuasion.oracle import INTERPRETABLE, UNINTERPRETABLE


@pytest.fixture
def pop():
    return career.canonical_population()


def test_reference_population(pop):
    assert pop.p_doc_low == F(3, 4) and pop.base.p_ai == F(4, 5)
    acc = career.accuracy_delta(pop)
    assert acc.delta1 == F(-123, 25000)
    assert acc.delta2 == F(117, 6250)
    assert acc.delta == F(69, 5000)
    assert acc.tau_bar == F(69, 5069)
    assert pop.tau == acc.tau_bar / 2


def test_delta_sign_certified_by_bound(pop):
    acc = career.accuracy_delta(pop)
    p = pop.base
    assert acc.delta > 0
    assert (p.p_ai - pop.p_doc_low) * p.lam * (1 - p.gamma) > 0


def test_high_type_behavior(pop):
    report = career.behavior_diff_cases(pop)
    assert report.mimicry and report.matches_expected
    assert len(report.cells) == 64 and len(report.differing) == 8
    assert not any(c.fallback for c in report.differing)
    for cell in report.differing:
        acts = (cell.low[INTERPRETABLE], cell.low[UNINTERPRETABLE])
        if cell.d == 0 and cell.a == 0:
            assert cell.ai_at_doc_dim == 1 and acts == (1, 0)
        else:
            assert (cell.d, cell.a) == (0, 1) and cell.ai_at_doc_dim == 0 and acts == (0, 1)
    for cell in report.cells:
        if (cell.d, cell.a) == (1, 0):
            assert cell.low[INTERPRETABLE] == cell.low[UNINTERPRETABLE] == 1


def test_accuracy_gap_beats_bound(pop):
    acc = career.accuracy_delta(pop)
    for k in range(10):
        tau = acc.tau_bar * k / 10
        diff = (career.population_accuracy(pop, UNINTERPRETABLE, tau)
                - career.population_accuracy(pop, INTERPRETABLE, tau))
        assert diff >= acc.lower_bound(tau) > 0
    assert acc.lower_bound(acc.tau_bar) == 0


def test_extreme_tau(pop):
    acc = career.accuracy_delta(pop)
    zero = (career.population_accuracy(pop, UNINTERPRETABLE, F(0))
            - career.population_accuracy(pop, INTERPRETABLE, F(0)))
    assert zero == acc.delta
    for regime in (INTERPRETABLE, UNINTERPRETABLE):
        assert career.population_accuracy(pop, regime, F(1)) == career.type_accuracy(pop, regime, "high")


def test_oracle_parts_match_formulas(pop):
    acc = career.accuracy_delta(pop)
    assert career.oracle_delta_parts(pop) == (acc.delta1, acc.delta2)


def test_construction():
    pp = career.construct_career_params("0.3", "0.2", "0.5", "0.6", p_ai="0.8")
    assert pp.p_doc_low == F(287, 380)
    assert F(128, 191) < pp.p_doc_low < F(4, 5) and pp.p_doc_low > F(27, 38)
    auto = career.construct_career_params("0.3", "0.2", "0.5", "0.6")
    assert auto.base.p_ai == F(25, 28) and auto.p_doc_low == F(47125, 55384)
    assert career.accuracy_delta(auto).delta > 0


def test_infeasible_construction():
    with pytest.raises(InfeasibleConstruction):
        career.construct_career_params("0.3", "0.4", "0.5", "0.6")
    with pytest.raises(InfeasibleConstruction):
        career.construct_career_params("0.3", "0.2", "0.5", "0.6", p_ai="0.7")


def test_population_checks(pop):
    with pytest.raises(InvalidParams):
        career.check_population(career.PopulationParams(pop.base, F(9, 10), F(1, 2)))
    with pytest.raises(InvalidParams):
        career.check_population(career.PopulationParams(pop.base, F(3, 4), F(0)))


def test_verification_catches_corrupted_formula(pop, monkeypatch):
    monkeypatch.setattr(career, "delta_formulas", lambda p, low: (F(0), F(1)))
    with pytest.raises(InvariantViolation):
        career.accuracy_delta(pop)
