"""Costly extra attention signal drawn after the AI's output.

The AI here has no attention (pi_ai = 0), so it always reports X^AI = (0, 0)
and A = 0; only its comprehension signal W^AI is informative. With the
doctor's critical dimension at L and D = 0 there are four cases:

    1: X^Doc = (0, 0), W^AI = L      2: X^Doc = (0, 0), W^AI = R
    3: X^Doc = (0, 1), W^AI = L      4: X^Doc = (0, 1), W^AI = R

An interpretable AI lets the doctor tell the cases apart; an uninterpretable
one only reveals X^Doc, so cases 1/2 and 3/4 are pooled.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import thresholds
from .errors import InvalidParams, InvariantViolation
from .model import L, R, ModelParams, require_valid
from .oracle import INTERPRETABLE, UNINTERPRETABLE, oracle_for
from .rational import HALF, to_fraction

CASES = (1, 2, 3, 4)
REGIMES = (INTERPRETABLE, UNINTERPRETABLE)
# case -> (X^Doc relative to W^Doc = L, W^AI)
CASE_SIGNALS = {1: ((0, 0), L), 2: ((0, 0), R), 3: ((0, 1), L), 4: ((0, 1), R)}


@dataclass(frozen=True)
class FreerideParams:
    base: ModelParams
    cost: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cost", to_fraction(self.cost))


def check_freeride(fp: FreerideParams) -> FreerideParams:
    p = fp.base
    problems = []
    if p.pi_ai != 0:
        problems.append(f"pi_ai must be 0, got {p.pi_ai}")
    if p.phi_ai != 1:
        problems.append("the extension assumes phi_ai = 1")
    if fp.cost <= 0:
        problems.append(f"cost must be positive, got {fp.cost}")
    if problems:
        raise InvalidParams("; ".join(problems))
    require_valid(p)
    t1 = thresholds.p1(p)
    if not p.p_ai < t1:
        problems.append(f"need p_ai={p.p_ai} < p1={t1}")
    if not p.p_doc >= t1:
        problems.append(f"need p_doc={p.p_doc} >= p1={t1}")
    if problems:
        raise InvalidParams("; ".join(problems))
    return fp


def mu_eta(p: ModelParams) -> Tuple[Fraction, Fraction]:
    """Posterior that W = W^Doc when W^AI agrees (mu) or disagrees (eta), ignoring X^Doc."""
    pd, pa = p.p_doc, p.p_ai
    mu = pd * pa / (pd * pa + (1 - pd) * (1 - pa))
    eta = pd * (1 - pa) / (pd * (1 - pa) + pa * (1 - pd))
    return mu, eta


def _delta_clean(p: ModelParams, m: Fraction) -> Fraction:
    g, lam, d = p.gamma, p.lam, p.pi_doc
    num = g * (m * (1 - lam * d) + (1 - m) * lam * (1 - d)) - (1 - g) * (1 - m) * lam
    den = g * (1 - d) * (1 - lam * d) + (1 - g) * (1 - lam * d)
    return d * (1 - d) * num / den


def _delta_noisy(p: ModelParams, m: Fraction) -> Fraction:
    g, lam, d = p.gamma, p.lam, p.pi_doc
    return g * lam * d * (1 - d) / (m * lam * (1 - g * d) + (1 - m) * g * (1 - lam * d))


def delta_formulas(p: ModelParams) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    mu, eta = mu_eta(p)
    return _delta_clean(p, mu), _delta_clean(p, eta), _delta_noisy(p, mu), _delta_noisy(p, eta)


def _case_predicate(case: int):
    x_doc, w_ai = CASE_SIGNALS[case]
    return lambda o: o.w_doc == L and o.x_doc == x_doc and o.w_ai == w_ai and o.x_ai == (0, 0)


def oracle_deltas(p: ModelParams) -> Tuple[Fraction, ...]:
    """Accuracy gain P(Z=1, X^E_L=1 | S_i) - P(Z=0, X^E_L=1 | S_i) by enumeration."""
    o = oracle_for(p, with_extra=True)
    out = []
    for case in CASES:
        given = _case_predicate(case)
        up = o.conditional(lambda a: a.z == 1 and a.x_e[L] == 1, given)
        down = o.conditional(lambda a: a.z == 0 and a.x_e[L] == 1, given)
        out.append(up - down)
    return tuple(out)


def mixture_weights(p: ModelParams) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    """P(S_i | X^Doc, W^Doc = L) for each case, from the oracle."""
    o = oracle_for(p)
    out = []
    for case in CASES:
        x_doc, _ = CASE_SIGNALS[case]
        out.append(o.conditional(_case_predicate(case), lambda a, x=x_doc: a.w_doc == L and a.x_doc == x))
    return tuple(out)


@dataclass(frozen=True)
class FreerideReport:
    deltas: Tuple[Fraction, Fraction, Fraction, Fraction]
    mu: Fraction
    eta: Fraction
    c1: Optional[Fraction] = None
    c2: Optional[Fraction] = None
    branch: Optional[str] = None
    mixtures: Optional[Tuple[Fraction, Fraction]] = None
    regime_policies: Optional[Dict[str, Tuple[bool, bool, bool, bool]]] = None


def freeride_deltas(fp: FreerideParams, *, verify: bool = True) -> FreerideReport:
    check_freeride(fp)
    deltas = delta_formulas(fp.base)
    if verify:
        direct = oracle_deltas(fp.base)
        if direct != deltas:
            raise InvariantViolation(
                "closed-form accuracy gains disagree with enumeration",
                counterexample={"params": fp.base.describe(), "formula": deltas, "oracle": direct},
            )
    mu, eta = mu_eta(fp.base)
    d1, d2, d3, d4 = deltas
    if not (d1 > d2 > 0 and d3 > d4 > 0 and HALF < eta < mu < 1):
        raise InvariantViolation(
            "expected gains or posteriors out of order",
            counterexample={"params": fp.base.describe(), "deltas": deltas, "mu": mu, "eta": eta},
        )
    return FreerideReport(deltas, mu, eta)


def pooled_gains(p: ModelParams, deltas=None) -> Tuple[Fraction, Fraction]:
    """Expected gains an uninterpretable-AI doctor sees for X^Doc = (0,0) and (0,1)."""
    d1, d2, d3, d4 = delta_formulas(p) if deltas is None else deltas
    w1, w2, w3, w4 = mixture_weights(p)
    return w1 * d1 + w2 * d2, w3 * d3 + w4 * d4


def cost_interval(fp: FreerideParams) -> Tuple[Fraction, Fraction, str]:
    """(c1, c2, branch) following the three cases on the sign of Delta2 - Delta4."""
    check_freeride(fp)
    d1, d2, d3, d4 = delta_formulas(fp.base)
    m12, m34 = pooled_gains(fp.base, (d1, d2, d3, d4))
    if d2 > d4:
        c1, c2, branch = d4, min(d2, m34), "delta2>delta4"
    elif d2 == d4:
        c1, c2, branch = d2, min(m12, m34), "delta2=delta4"
    else:
        c1, c2, branch = d2, min(m12, d4), "delta2<delta4"
    if not c1 < c2:
        raise InvariantViolation(
            f"empty cost interval ({c1}, {c2})", counterexample={"params": fp.base.describe()}
        )
    return c1, c2, branch


def in_interval(fp: FreerideParams, c=None) -> bool:
    """Whether c lies in (c1, c2), the only range where the regime comparison is claimed."""
    c = fp.cost if c is None else to_fraction(c)
    c1, c2, _ = cost_interval(fp)
    return c1 < c < c2


def draw_policy(fp: FreerideParams, regime: str, case: int, c=None) -> bool:
    """Whether the doctor buys the extra signal in ``case``; weak inequality at indifference."""
    check_freeride(fp)
    if case not in CASES:
        raise ValueError(f"case must be one of {CASES}, got {case}")
    c = fp.cost if c is None else to_fraction(c)
    if c <= 0:
        raise InvalidParams(f"cost must be positive, got {c}")
    deltas = delta_formulas(fp.base)
    if regime == INTERPRETABLE:
        return c <= deltas[case - 1]
    if regime == UNINTERPRETABLE:
        m12, m34 = pooled_gains(fp.base, deltas)
        return c <= (m12 if case in (1, 2) else m34)
    raise ValueError(f"unknown regime {regime!r}")


def draw_table(fp: FreerideParams, c) -> Dict[str, Tuple[bool, bool, bool, bool]]:
    return {r: tuple(draw_policy(fp, r, k, c) for k in CASES) for r in REGIMES}


def draw_count(fp: FreerideParams, regime: str, c) -> int:
    return sum(draw_table(fp, c)[regime])


def draw_probability(fp: FreerideParams, regime: str, c) -> Fraction:
    """Ex-ante probability that the doctor buys the extra signal."""
    policy = draw_table(fp, c)[regime]
    o = oracle_for(fp.base)
    total = Fraction(0)
    for case in CASES:
        if policy[case - 1]:
            total += o.mass(lambda a, k=case: _case_of(a) == k)
    return total


def _case_of(o) -> Optional[int]:
    """Case index of a negative initial diagnosis, in the doctor's own dimension labels."""
    if o.x_doc[o.w_doc] == 1:
        return None
    other = o.x_doc[1 - o.w_doc]
    return 1 + 2 * other + (0 if o.w_ai == o.w_doc else 1)


def freeride_accuracy(fp: FreerideParams, c, regime: str) -> Fraction:
    """P(F = Z) when the doctor follows the regime's draw policy at cost c.

    D = 1 keeps F = 1. Otherwise a doctor who draws sets F to the extra
    signal's bit in her critical dimension; one who does not keeps F = 0.
    """
    check_freeride(fp)
    policy = draw_table(fp, c)[regime]
    o = oracle_for(fp.base, with_extra=True)
    hit = 0
    for atom, w in zip(o.atoms, o.weights):
        case = _case_of(atom)
        if case is None:
            f = 1
        elif policy[case - 1]:
            f = atom.x_e[atom.w_doc]
        else:
            f = 0
        if f == atom.z:
            hit += w
    return Fraction(hit, o.denominator)


def baseline_accuracy(fp: FreerideParams) -> Fraction:
    """Accuracy with no extra signal: F = D."""
    o = oracle_for(fp.base)
    return o.mass(lambda a: a.x_doc[a.w_doc] == a.z)


def freeride_report(fp: FreerideParams) -> FreerideReport:
    base = freeride_deltas(fp)
    c1, c2, branch = cost_interval(fp)
    m12, m34 = pooled_gains(fp.base, base.deltas)
    policies = draw_table(fp, (c1 + c2) / 2)
    return FreerideReport(base.deltas, base.mu, base.eta, c1, c2, branch, (m12, m34), policies)


def critical_costs(fp: FreerideParams) -> List[Fraction]:
    """Every cost at which some draw decision switches, sorted."""
    deltas = delta_formulas(fp.base)
    return sorted(set(deltas) | set(pooled_gains(fp.base, deltas)))


def cost_probe_grid(fp: FreerideParams) -> List[Fraction]:
    """Breakpoints, midpoints between them, and points just below and above the range."""
    points = critical_costs(fp)
    grid = [points[0] / 2]
    for a, b in zip(points, points[1:]):
        grid += [a, (a + b) / 2]
    grid += [points[-1], points[-1] * Fraction(11, 10)]
    return grid


def canonical_freeride(cost=None) -> FreerideParams:
    base = ModelParams(
        gamma=Fraction(3, 10), lam=Fraction(1, 5), pi_doc=HALF, p_doc=Fraction(19, 20),
        pi_ai=Fraction(0), p_ai=Fraction(4, 5),
    )
    if cost is None:
        c1, c2, _ = cost_interval(FreerideParams(base, Fraction(1, 100)))
        cost = (c1 + c2) / 2
    return FreerideParams(base, to_fraction(cost))


__all__ = [
    "FreerideParams", "FreerideReport", "check_freeride", "mu_eta", "delta_formulas", "oracle_deltas",
    "mixture_weights", "freeride_deltas", "pooled_gains", "cost_interval", "draw_policy", "draw_table",
    "draw_count", "in_interval", "draw_probability", "freeride_accuracy", "baseline_accuracy", "freeride_report",
    "critical_costs", "cost_probe_grid", "canonical_freeride", "CASES",
]
