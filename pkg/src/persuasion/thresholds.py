"""Persuasion thresholds on the doctor's comprehension skill.

p1 and p2 bound persuasion from D=0 to F=1 (interpretable and uninterpretable
AI); the doctor is persuaded iff p_doc <= threshold. p3 and p4 bound
persuasion from D=1 to F=0; the doctor is persuaded iff p_doc < threshold.
Values are returned unclamped: p2 can exceed 1 and p4 can fall below 1/2.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Optional, Tuple

from .errors import InvalidParams
from .model import ModelParams, require_valid, validate_params
from .rational import HALF

NEVER, INTERVAL, ALWAYS = "never", "interval", "always"

# comparison used by each threshold: "le" persuades at equality, "lt" does not
COMPARISON: Dict[str, str] = {
    "p1": "le", "p2": "le", "p1_prime": "le", "p1_dprime": "le", "p2_prime": "le",
    "p3": "lt", "p4": "lt",
}


def _odds(p: ModelParams):
    return (1 - p.gamma) / p.gamma, (1 - p.lam) / p.lam


def _p1(p: ModelParams) -> Fraction:
    og, ol = _odds(p)
    qa, m = p.p_ai, (1 - p.pi_doc) * (1 - p.pi_ai)
    return qa * (ol + m) / ((1 - qa) * og + qa * ol + (2 * qa - 1) * m)


def _p2(p: ModelParams) -> Fraction:
    og, ol = _odds(p)
    qa = p.p_ai
    return (ol * qa + (1 - p.pi_doc)) / (og * (1 - qa) + ol * qa)


def _p3(p: ModelParams) -> Fraction:
    og, ol = _odds(p)
    qa, m = p.p_ai, (1 - p.pi_doc) * (1 - p.pi_ai)
    return qa * (og - m) / (qa * og + (1 - qa) * ol - (2 * qa - 1) * m)


def _p4(p: ModelParams) -> Fraction:
    og, ol = _odds(p)
    qa, a = p.p_ai, p.pi_ai
    m = (1 - p.pi_doc) * (1 - a)
    top = og * (1 - a + qa * a)
    return (top - m) / (top + ol * (1 - qa * a))


def _p1_prime(p: ModelParams) -> Fraction:
    g, lam, d, a, qa, f = p.gamma, p.lam, p.pi_doc, p.pi_ai, p.p_ai, p.phi_ai
    b = g * a * (1 - d) - (1 - g) * (1 - f)
    c = lam * (1 - d) * (1 - a) + (1 - lam) * f
    e = ((1 - g) * f - g * (1 - d) * (1 - a)) * (lam * a * (1 - d) + (1 - lam) * (1 - f))
    return qa * b * c / (qa * b * c + (1 - qa) * e)


def _p1_dprime(p: ModelParams) -> Fraction:
    og, ol = _odds(p)
    qa, f, m = p.p_ai, p.phi_ai, (1 - p.pi_doc) * (1 - p.pi_ai)
    return qa * (ol * f + m) / (ol * qa * f + og * (1 - qa) * f + (2 * qa - 1) * m)


def _p2_prime(p: ModelParams) -> Fraction:
    og, ol = _odds(p)
    qa = p.p_ai
    k = (1 - p.phi_ai) / p.pi_ai
    num = k * ol * (1 - qa) + ol * qa + (1 - p.pi_doc)
    den = k * (og * qa + ol * (1 - qa)) + og * (1 - qa) + ol * qa
    return num / den


FORMULAS: Dict[str, Callable[[ModelParams], Fraction]] = {
    "p1": _p1, "p2": _p2, "p3": _p3, "p4": _p4,
    "p1_prime": _p1_prime, "p1_dprime": _p1_dprime, "p2_prime": _p2_prime,
}


def _no_hallucination(p: ModelParams) -> ModelParams:
    require_valid(p)
    if p.phi_ai != 1:
        raise InvalidParams("p1..p4 assume an AI that never hallucinates (phi_ai = 1)", ["phi_ai"])
    return p


def p1(p: ModelParams) -> Fraction:
    """Largest p_doc at which an interpretable AI persuades D=0 to F=1 on a comprehension difference."""
    return _p1(_no_hallucination(p))


def p2(p: ModelParams) -> Fraction:
    """Largest p_doc at which an uninterpretable AI persuades D=0 to F=1 with X^Doc off-critical positive."""
    return _p2(_no_hallucination(p))


def p3(p: ModelParams) -> Fraction:
    """p_doc below which an interpretable AI persuades D=1 to F=0 on a comprehension difference."""
    return _p3(_no_hallucination(p))


def p4(p: ModelParams) -> Fraction:
    """p_doc below which an uninterpretable AI persuades D=1 to F=0."""
    return _p4(_no_hallucination(p))


def hallucination_thresholds(p: ModelParams) -> Tuple[Fraction, Fraction, Fraction]:
    """(p1', p1'', p2') for an AI that hallucinates with probability 1 - phi_ai."""
    require_valid(p)
    if p.phi_ai == 1:
        raise InvalidParams("hallucination thresholds need phi_ai < 1", ["phi_ai"])
    return _p1_prime(p), _p1_dprime(p), _p2_prime(p)


def in_reversal_region(p: ModelParams) -> bool:
    """Holds iff p4 >= 1/2, the region where the reversed attribution effect is claimed."""
    og, ol = _odds(p)
    lhs = (ol * p.p_ai - og * (1 - p.p_ai)) * p.pi_ai
    rhs = 1 / p.lam - 1 / p.gamma + 2 * (1 - p.pi_doc) * (1 - p.pi_ai)
    return lhs >= rhs


def p2_above_one_bound(p: ModelParams) -> Fraction:
    """p2 > 1 holds whenever p_ai exceeds this value."""
    return 1 - p.gamma / (1 - p.gamma) * (1 - p.pi_doc)


def classify(name: str, value: Fraction) -> str:
    """Shape of the persuaded set of p_doc within [1/2, 1] for threshold ``name``."""
    if COMPARISON[name] == "le":
        if value < HALF:
            return NEVER
        return ALWAYS if value >= 1 else INTERVAL
    if value <= HALF:
        return NEVER
    return ALWAYS if value > 1 else INTERVAL


def persuades(name: str, threshold: Fraction, p_doc: Fraction) -> bool:
    return p_doc <= threshold if COMPARISON[name] == "le" else p_doc < threshold


@dataclass(frozen=True)
class ThresholdSet:
    p1: Fraction
    p2: Fraction
    p3: Fraction
    p4: Fraction
    p1_prime: Optional[Fraction] = None
    p1_dprime: Optional[Fraction] = None
    p2_prime: Optional[Fraction] = None

    def items(self) -> Iterable[Tuple[str, Fraction]]:
        for name in ("p1", "p2", "p3", "p4", "p1_prime", "p1_dprime", "p2_prime"):
            value = getattr(self, name)
            if value is not None:
                yield name, value

    def classification(self) -> Dict[str, str]:
        return {name: classify(name, value) for name, value in self.items()}

    @property
    def ordered(self) -> bool:
        return self.p4 <= self.p3 <= self.p1 <= self.p2


def threshold_set(p: ModelParams) -> ThresholdSet:
    """p1..p4 at phi_ai = 1, plus the hallucination variants when phi_ai < 1.

    With hallucination p1..p4 are evaluated at the same point with phi_ai set to 1.
    """
    require_valid(p)
    base = p.with_(phi_ai=Fraction(1), pi_bar=None)
    core = dict(p1=_p1(base), p2=_p2(base), p3=_p3(base), p4=_p4(base))
    if p.phi_ai < 1:
        a, b, c = hallucination_thresholds(p)
        core.update(p1_prime=a, p1_dprime=b, p2_prime=c)
    return ThresholdSet(**core)


@dataclass(frozen=True)
class ThresholdCurve:
    grid: Tuple[Tuple[Fraction, ThresholdSet], ...]

    def __len__(self):
        return len(self.grid)

    def column(self, name: str) -> Tuple[Fraction, ...]:
        return tuple(getattr(ts, name) for _, ts in self.grid)


def threshold_curve(p: ModelParams, pi_grid: Iterable) -> ThresholdCurve:
    """ThresholdSet at each pi_doc in ``pi_grid``; any invalid point is an error."""
    from .rational import to_fraction

    values = [to_fraction(v) for v in pi_grid]
    if not values:
        raise InvalidParams("empty pi_doc grid")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise InvalidParams("pi_doc grid must be strictly increasing")
    bad = []
    points = []
    for v in values:
        try:
            q = p.with_(pi_doc=v)
        except InvalidParams as exc:
            bad.append((v, str(exc)))
            continue
        report = validate_params(q)
        if not report.ok:
            bad.append((v, report.summary()))
            continue
        points.append((v, threshold_set(q)))
    if bad:
        detail = "; ".join(f"pi_doc={v}: {why}" for v, why in bad)
        raise InvalidParams(f"invalid grid points: {detail}", [str(v) for v, _ in bad])
    return ThresholdCurve(tuple(points))


DEFAULT_STEP = Fraction(1, 10**4)


def finite_difference(fn: Callable[[ModelParams], Fraction], p: ModelParams, var: str = "pi_doc",
                      h: Fraction = DEFAULT_STEP) -> Fraction:
    """Exact central difference of fn in ``var``; one-sided at the ends of [0, 1]."""
    x = getattr(p, var)
    lo, hi = x - h, x + h
    if lo < 0:
        lo = x
    if hi > 1:
        hi = x
    return (fn(p.with_(**{var: hi})) - fn(p.with_(**{var: lo}))) / (hi - lo)


def slope(name: str, p: ModelParams, h: Fraction = DEFAULT_STEP) -> Fraction:
    return finite_difference(FORMULAS[name], p, "pi_doc", h)


__all__ = [
    "p1", "p2", "p3", "p4", "hallucination_thresholds", "in_reversal_region", "p2_above_one_bound",
    "ThresholdSet", "ThresholdCurve", "threshold_set", "threshold_curve", "classify", "persuades",
    "finite_difference", "slope", "FORMULAS", "COMPARISON", "NEVER", "INTERVAL", "ALWAYS",
]
