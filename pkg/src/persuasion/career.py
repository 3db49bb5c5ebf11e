"""Career concerns with two doctor types.

High types have perfect comprehension (p_doc = 1); low types have
p3 < p_doc_low < p_ai. Doctors care only about reputation, so low types copy
the high type's action in every observable cell. High-type actions follow
Bayes' rule at p_doc = 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from . import thresholds
from .diagnosis import final_interpretable, final_uninterpretable
from .errors import InfeasibleConstruction, InvalidParams, InvariantViolation, Unrealizable
from .model import ModelParams, feasible_comprehension_floor, require_valid, validate_params
from .oracle import BITS, INTERPRETABLE, UNINTERPRETABLE, oracle_for
from .rational import HALF, ONE, to_fraction

REGIMES = (INTERPRETABLE, UNINTERPRETABLE)


@dataclass(frozen=True)
class PopulationParams:
    base: ModelParams
    p_doc_low: Fraction
    tau: Fraction
    p_doc_high: Fraction = ONE

    def __post_init__(self):
        for name in ("p_doc_low", "tau", "p_doc_high"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))

    @property
    def high(self) -> ModelParams:
        return self.base.with_(p_doc=self.p_doc_high)

    @property
    def low(self) -> ModelParams:
        return self.base.with_(p_doc=self.p_doc_low)


def check_population(pp: PopulationParams) -> PopulationParams:
    """Raise InvalidParams unless every population invariant holds."""
    problems = []
    if pp.base.phi_ai != 1:
        problems.append("the career model assumes phi_ai = 1")
    for label, q in (("high", pp.high), ("low", pp.low)):
        report = validate_params(q)
        if not report.ok:
            problems.append(f"{label} type: {report.summary()}")
    if problems:
        raise InvalidParams("; ".join(problems))
    t3 = thresholds.p3(pp.low)
    t2 = thresholds.p2(pp.low)
    if pp.p_doc_high != 1:
        problems.append(f"p_doc_high must be 1, got {pp.p_doc_high}")
    if not t3 < pp.p_doc_low < pp.base.p_ai:
        problems.append(f"need p3={t3} < p_doc_low={pp.p_doc_low} < p_ai={pp.base.p_ai}")
    if not pp.p_doc_high < t2:
        problems.append(f"need p_doc_high={pp.p_doc_high} < p2={t2}")
    if not 0 < pp.tau < 1:
        problems.append(f"tau must lie in (0, 1), got {pp.tau}")
    if problems:
        raise InvalidParams("; ".join(problems))
    return pp


# ---------------------------------------------------------------- behavior


@dataclass(frozen=True)
class CellBehavior:
    x_doc: Tuple[int, int]
    w_doc: int
    x_ai: Tuple[int, int]
    w_ai: int
    d: int
    a: int
    ai_at_doc_dim: int
    high: Dict[str, int]
    low: Dict[str, int]
    fallback: bool = False

    @property
    def differs(self) -> bool:
        return self.low[INTERPRETABLE] != self.low[UNINTERPRETABLE]

    @property
    def expected_case(self) -> Optional[str]:
        if self.d == 0 and self.a == 0 and self.ai_at_doc_dim == 1:
            return "i"
        if self.d == 0 and self.a == 1 and self.ai_at_doc_dim == 0:
            return "ii"
        return None


@dataclass(frozen=True)
class CaseReport:
    cells: Tuple[CellBehavior, ...]

    @property
    def differing(self) -> Tuple[CellBehavior, ...]:
        return tuple(c for c in self.cells if c.differs)

    @property
    def mimicry(self) -> bool:
        return all(c.low == c.high for c in self.cells)

    @property
    def matches_expected(self) -> bool:
        """Low types differ across regimes exactly in the two listed cases, in the stated direction."""
        for c in self.cells:
            case = c.expected_case
            if case is None and c.differs:
                return False
            if case == "i" and not (c.low[INTERPRETABLE] == 1 and c.low[UNINTERPRETABLE] == 0):
                return False
            if case == "ii" and not (c.low[INTERPRETABLE] == 0 and c.low[UNINTERPRETABLE] == 1):
                return False
        return True


def _high_tables(pp: PopulationParams):
    high = pp.high
    interp: Dict[tuple, int] = {}
    unint: Dict[tuple, int] = {}
    fallback = set()
    for x_doc in BITS:
        for w_doc in (0, 1):
            d = x_doc[w_doc]
            for a in (0, 1):
                try:
                    unint[(x_doc, w_doc, a)] = final_uninterpretable(high, x_doc, w_doc, d, a).f
                except Unrealizable:
                    unint[(x_doc, w_doc, a)] = d
                    fallback.add((x_doc, w_doc, a))
            for x_ai in BITS:
                for w_ai in (0, 1):
                    key = (x_doc, w_doc, x_ai, w_ai)
                    try:
                        interp[key] = final_interpretable(high, x_doc, w_doc, x_ai, w_ai).f
                    except Unrealizable:
                        interp[key] = d
                        fallback.add(key)
    return interp, unint, fallback


def behavior_diff_cases(pp: PopulationParams) -> CaseReport:
    """Final diagnosis of each type in every (X^Doc, W^Doc, X^AI, W^AI) cell, per regime."""
    check_population(pp)
    interp, unint, fallback = _high_tables(pp)
    cells = []
    for (x_doc, w_doc, x_ai, w_ai), f_int in interp.items():
        d, a = x_doc[w_doc], x_ai[w_ai]
        f_unint = unint[(x_doc, w_doc, a)]
        acts = {INTERPRETABLE: f_int, UNINTERPRETABLE: f_unint}
        cells.append(CellBehavior(
            x_doc, w_doc, x_ai, w_ai, d, a, x_ai[w_doc], dict(acts), dict(acts),
            (x_doc, w_doc, x_ai, w_ai) in fallback or (x_doc, w_doc, a) in fallback,
        ))
    return CaseReport(tuple(cells))


def type_accuracy(pp: PopulationParams, regime: str, doctor_type: str) -> Fraction:
    """P(F = Z) for one type when every type plays the high type's table."""
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    params = {"high": pp.high, "low": pp.low}[doctor_type]
    interp, unint, _ = _high_tables(pp)
    o = oracle_for(params)
    hit = 0
    for atom, w in zip(o.atoms, o.weights):
        if regime == INTERPRETABLE:
            f = interp[(atom.x_doc, atom.w_doc, atom.x_ai, atom.w_ai)]
        else:
            f = unint[(atom.x_doc, atom.w_doc, atom.x_ai[atom.w_ai])]
        if f == atom.z:
            hit += w
    return Fraction(hit, o.denominator)


def population_accuracy(pp: PopulationParams, regime: str, tau: Optional[Fraction] = None) -> Fraction:
    """tau * accuracy(high) + (1 - tau) * accuracy(low); ``tau`` overrides pp.tau within [0, 1]."""
    check_population(pp if tau is None else _with_tau(pp, HALF))
    t = pp.tau if tau is None else to_fraction(tau)
    if not 0 <= t <= 1:
        raise InvalidParams(f"tau must lie in [0, 1], got {t}")
    return t * type_accuracy(pp, regime, "high") + (1 - t) * type_accuracy(pp, regime, "low")


def _with_tau(pp: PopulationParams, tau) -> PopulationParams:
    return PopulationParams(pp.base, pp.p_doc_low, to_fraction(tau), pp.p_doc_high)


# ---------------------------------------------------------------- accuracy change


@dataclass(frozen=True)
class AccuracyDelta:
    delta1: Fraction
    delta2: Fraction
    delta: Fraction
    tau_bar: Fraction

    def lower_bound(self, tau: Fraction) -> Fraction:
        """Guaranteed accuracy gain from uninterpretability at high-type share tau."""
        return -tau + (1 - tau) * self.delta


def delta_formulas(p: ModelParams, p_low: Fraction) -> Tuple[Fraction, Fraction]:
    g, lam, d, a, qa = p.gamma, p.lam, p.pi_doc, p.pi_ai, p.p_ai
    mix = lam * g * (p_low + qa - 2 * p_low * qa) * a * (1 - d) * (1 - a)
    delta1 = a * (1 - d) * (lam * (1 - g) * qa * (1 - p_low) - g * (1 - lam) * p_low * (1 - qa)) - mix
    delta2 = mix + a * (g * (1 - lam) * qa * (1 - p_low) - lam * (1 - g) * p_low * (1 - qa))
    return delta1, delta2


def oracle_delta_parts(pp: PopulationParams) -> Tuple[Fraction, Fraction]:
    """Delta1 and Delta2 as signed event masses at the low type's skill."""
    o = oracle_for(pp.low)

    def cell(d, a, att):
        return lambda x: (o.d_of(x) == d and o.a_of(x) == a and x.x_ai[x.w_doc] == att)

    m0, m1 = o.split_by_disease(cell(0, 0, 1))
    n0, n1 = o.split_by_disease(cell(0, 1, 0))
    return m0 - m1, n1 - n0


def accuracy_delta(pp: PopulationParams, *, verify: bool = True) -> AccuracyDelta:
    """Closed-form accuracy change of low types; with ``verify`` also checked by enumeration."""
    check_population(pp)
    d1, d2 = delta_formulas(pp.base, pp.p_doc_low)
    delta = d1 + d2
    result = AccuracyDelta(d1, d2, delta, delta / (1 + delta))
    if verify:
        o1, o2 = oracle_delta_parts(pp)
        direct = type_accuracy(pp, UNINTERPRETABLE, "low") - type_accuracy(pp, INTERPRETABLE, "low")
        if (o1, o2, direct) != (d1, d2, delta):
            raise InvariantViolation(
                "closed-form accuracy change disagrees with enumeration",
                counterexample={"params": pp.low.describe(), "formula": (d1, d2), "oracle": (o1, o2, direct)},
            )
    return result


# ---------------------------------------------------------------- construction


def construct_career_params(gamma, lam, pi_doc, pi_ai, p_ai=None, tau=None) -> PopulationParams:
    """Primitives satisfying every hypothesis of the career-concerns comparison.

    p_ai defaults to the midpoint between its binding lower bound and 1;
    p_doc_low is the midpoint of (max(p3, comprehension floor), p_ai); tau
    defaults to half of tau_bar.
    """
    gamma, lam, pi_doc, pi_ai = (to_fraction(v) for v in (gamma, lam, pi_doc, pi_ai))
    if not 0 < lam <= gamma < HALF:
        raise InfeasibleConstruction(f"need 0 < lambda <= gamma < 1/2, got lambda={lam}, gamma={gamma}")
    if not (0 < pi_doc < 1 and 0 < pi_ai < 1):
        raise InfeasibleConstruction("attention skills must lie in (0, 1)")
    probe = ModelParams(gamma=gamma, lam=lam, pi_doc=pi_doc, p_doc=ONE, pi_ai=pi_ai, p_ai=ONE)
    ai_floor = feasible_comprehension_floor(probe, "ai")
    lower = max(thresholds.p2_above_one_bound(probe), ai_floor, HALF)
    if p_ai is None:
        if lower >= 1:
            raise InfeasibleConstruction(f"no p_ai in ({lower}, 1] satisfies the hypotheses")
        p_ai = (lower + 1) / 2
    else:
        p_ai = to_fraction(p_ai)
        if not lower < p_ai <= 1:
            raise InfeasibleConstruction(f"p_ai={p_ai} must exceed {lower} and be at most 1")
    probe = probe.with_(p_ai=p_ai)
    low_bound = max(thresholds._p3(probe), feasible_comprehension_floor(probe, "doctor"), HALF)
    if low_bound >= p_ai:
        raise InfeasibleConstruction(f"empty interval for p_doc_low: ({low_bound}, {p_ai})")
    p_low = (low_bound + p_ai) / 2
    base = probe.with_(p_doc=p_low)
    require_valid(base)
    pp = PopulationParams(base, p_low, HALF)
    try:
        check_population(pp)
    except InvalidParams as exc:
        raise InfeasibleConstruction(str(exc)) from exc
    if tau is None:
        tau = accuracy_delta(pp, verify=False).tau_bar / 2
    return _with_tau(pp, tau)


def canonical_population(tau=None) -> PopulationParams:
    """Reference population: gamma=3/10, lambda=1/5, pi_doc=1/2, pi_ai=3/5, p_ai=4/5, p_doc_low=3/4."""
    base = ModelParams(gamma=Fraction(3, 10), lam=Fraction(1, 5), pi_doc=HALF, p_doc=Fraction(3, 4),
                       pi_ai=Fraction(3, 5), p_ai=Fraction(4, 5))
    pp = check_population(PopulationParams(base, Fraction(3, 4), HALF))
    if tau is None:
        tau = accuracy_delta(pp, verify=False).tau_bar / 2
    return _with_tau(pp, tau)


__all__ = [
    "PopulationParams", "check_population", "CellBehavior", "CaseReport", "behavior_diff_cases",
    "type_accuracy", "population_accuracy", "AccuracyDelta", "delta_formulas", "oracle_delta_parts",
    "accuracy_delta", "construct_career_params", "canonical_population", "REGIMES",
]
