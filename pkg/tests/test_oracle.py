from fractions import Fraction as F

import pytest

from persuasion import thresholds
from persuasion.errors import NullEvent
from persuasion.model import canonical_params
from persuasion.oracle import (ALWAYS, INTERVAL, NEVER, TEMPLATES, exact_threshold_in_p_doc, interpretable_info,
                               oracle_for, posterior_disease, uninterpretable_info)


def test_conditional_of_event_on_itself(canon):
    o = oracle_for(canon)
    assert o.conditional(lambda a: a.z == 1, lambda a: a.z == 1) == 1
    assert o.mass(lambda a: a.z == 1) == F(3, 10)


def test_null_conditioning_raises(canon):
    with pytest.raises(NullEvent):
        oracle_for(canon).conditional(lambda a: True, lambda a: a.x_doc == (1, 1) and a.z == 0)


def test_both_abnormal_posterior_is_one(canon):
    info = interpretable_info((1, 0), 0, (0, 1), 1)
    assert posterior_disease(canon, info) == 1


def test_uninterpretable_off_critical_posterior_above_half():
    p = canonical_params(p_doc=F(95, 100))
    post = posterior_disease(p, uninterpretable_info((0, 1), 0, 0, 1))
    assert post >= F(1, 2)


def test_off_critical_abnormality_alone_below_half(canon):
    o = oracle_for(canon)
    assert o.conditional(lambda a: a.z == 1, lambda a: a.x_doc == (0, 1) and a.w_doc == 0) < F(1, 2)


def test_bayes_decisions_follow_critical_bit(canon, halluc):
    for p in (canon, halluc):
        o = oracle_for(p)
        assert all(d == x[w] for (x, w), d in o.doctor_decisions.items())
        assert all(a == x[w] for (x, w), a in o.ai_decisions.items())


@pytest.mark.parametrize("name,root,kind", [
    ("p1", F(63, 71), INTERVAL),
    ("p2", F(111, 110), ALWAYS),
    ("p3", F(128, 191), INTERVAL),
    ("p4", F(139, 310), ALWAYS),
])
def test_canonical_crossings(canon, name, root, kind):
    sol = exact_threshold_in_p_doc(canon, name)
    assert sol.root == root
    assert sol.kind == kind
    assert sol.root == getattr(thresholds, name)(canon)


def test_bisection_brackets_interior_root(canon):
    sol = exact_threshold_in_p_doc(canon, "p1")
    lo, hi = sol.bisection
    assert lo <= sol.root <= hi and hi - lo <= F(1, 2**40)


def test_root_exactly_at_endpoint_is_handled():
    # at this point p4 equals 1/2 and the posterior never crosses inside the interval
    p = canonical_params(gamma=F(3, 10), lam=F(3, 10), pi_doc=F(7, 10), pi_ai=F(3, 10), p_ai=F(4, 5),
                         p_doc=F(219, 280))
    for name in ("p1", "p2", "p3", "p4"):
        assert exact_threshold_in_p_doc(p, name).root == getattr(thresholds, name)(p)


def test_never_kind_below_half():
    # p1 >= 1/2 whenever lambda <= gamma, so a "never" crossing needs noise above the prior
    p = canonical_params(gamma=F(1, 5), lam=F(9, 20), p_ai=F(7, 10))
    sol = exact_threshold_in_p_doc(p, "p1")
    assert sol.root == thresholds.FORMULAS["p1"](p) == F(448, 961)
    assert sol.kind == NEVER


def test_hallucination_crossings(halluc):
    a, b, c = thresholds.hallucination_thresholds(halluc)
    assert exact_threshold_in_p_doc(halluc, "p1_prime").root == a
    assert exact_threshold_in_p_doc(halluc, "p1_dprime").root == b
    assert exact_threshold_in_p_doc(halluc, "p2_prime").root == c


def test_unknown_template():
    with pytest.raises(ValueError):
        exact_threshold_in_p_doc(canonical_params(), "p9")
    assert set(TEMPLATES) >= {"p1", "p2", "p3", "p4"}


def test_extra_signal_marginal_matches_doctor_attention(canon):
    o = oracle_for(canon, with_extra=True)
    got = o.conditional(lambda a: a.x_e[0] == 1, lambda a: a.x[0] == 1)
    assert got == canon.pi_doc
