"""Brute-force ground truth over the finite outcome space.

Nothing here imports a closed form. Decisions used inside information sets
(the doctor's D and the AI's A) come from Bayes' rule applied to the
enumerated atoms.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

from .errors import InvalidParams, NonMonotonePosterior, NullEvent, Unrealizable
from .model import L, R, Bits, ModelParams, Outcome, factor_tables, require_valid, scaled_weight
from .rational import HALF

EventPredicate = Callable[[Outcome], bool]

BITS: Tuple[Bits, ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
DIMS = (L, R)

INTERPRETABLE = "interpretable"
UNINTERPRETABLE = "uninterpretable"


def outcome_space(with_extra: bool = False) -> Iterator[Outcome]:
    """Every outcome with x_w = z (the others have probability zero by construction)."""
    extras = BITS if with_extra else (None,)
    for z, w, other in itertools.product((0, 1), DIMS, (0, 1)):
        x = (z, other) if w == L else (other, z)
        for x_doc, w_doc, x_ai, w_ai, x_e in itertools.product(BITS, DIMS, BITS, DIMS, extras):
            yield Outcome(z, x, w, x_doc, w_doc, x_ai, w_ai, x_e)


class Oracle:
    """Enumerated atoms of one parameter point with integer-scaled weights."""

    def __init__(self, params: ModelParams, with_extra: bool = False, strict: bool = True):
        if strict:
            require_valid(params)
        self.params = params
        self.with_extra = with_extra
        t = factor_tables(params)
        self.denominator = t.denominator * (t.extra_denominator if with_extra else 1)
        atoms: List[Outcome] = []
        weights: List[int] = []
        for o in outcome_space(with_extra):
            wgt = scaled_weight(t, o)
            if wgt:
                atoms.append(o)
                weights.append(wgt)
        self.atoms: Tuple[Outcome, ...] = tuple(atoms)
        self.weights: Tuple[int, ...] = tuple(weights)
        self._doctor: Optional[Dict[Tuple[Bits, int], int]] = None
        self._ai: Optional[Dict[Tuple[Bits, int], int]] = None

    # -- masses

    def __len__(self):
        return len(self.atoms)

    def items(self) -> Iterator[Tuple[Outcome, Fraction]]:
        for o, w in zip(self.atoms, self.weights):
            yield o, Fraction(w, self.denominator)

    def raw_mass(self, pred: EventPredicate) -> int:
        return sum(w for o, w in zip(self.atoms, self.weights) if pred(o))

    def mass(self, pred: EventPredicate) -> Fraction:
        return Fraction(self.raw_mass(pred), self.denominator)

    def conditional(self, target: EventPredicate, given: EventPredicate) -> Fraction:
        num = 0
        den = 0
        for o, w in zip(self.atoms, self.weights):
            if given(o):
                den += w
                if target(o):
                    num += w
        if den == 0:
            raise NullEvent("conditioning event has probability zero")
        return Fraction(num, den)

    def split_by_disease(self, pred: EventPredicate) -> Tuple[Fraction, Fraction]:
        """(P(Z=0, pred), P(Z=1, pred))."""
        m = [0, 0]
        for o, w in zip(self.atoms, self.weights):
            if pred(o):
                m[o.z] += w
        return Fraction(m[0], self.denominator), Fraction(m[1], self.denominator)

    def grouped(self, key: Callable[[Outcome], object]) -> Dict[object, List[int]]:
        """key -> [scaled mass with z=0, scaled mass with z=1]."""
        out: Dict[object, List[int]] = defaultdict(lambda: [0, 0])
        for o, w in zip(self.atoms, self.weights):
            out[key(o)][o.z] += w
        return dict(out)

    # -- Bayes decisions

    @property
    def doctor_decisions(self) -> Dict[Tuple[Bits, int], int]:
        if self._doctor is None:
            groups = self.grouped(lambda o: (o.x_doc, o.w_doc))
            self._doctor = {k: int(m[1] >= m[0]) for k, m in groups.items()}
        return self._doctor

    @property
    def ai_decisions(self) -> Dict[Tuple[Bits, int], int]:
        if self._ai is None:
            groups = self.grouped(lambda o: (o.x_ai, o.w_ai))
            self._ai = {k: int(m[1] >= m[0]) for k, m in groups.items()}
        return self._ai

    def d_of(self, o: Outcome) -> int:
        return self.doctor_decisions[(o.x_doc, o.w_doc)]

    def a_of(self, o: Outcome) -> int:
        return self.ai_decisions[(o.x_ai, o.w_ai)]

    # -- information sets

    def info_predicate(self, info: "InformationSet", *, signals_only: bool = False) -> EventPredicate:
        return info_predicate(self, info, signals_only=signals_only)

    def posterior(self, info: "InformationSet") -> Fraction:
        m0, m1 = self.split_by_disease(self.info_predicate(info))
        if m0 + m1 == 0:
            raise NullEvent(f"information set has probability zero: {info}")
        return m1 / (m0 + m1)

    def info_masses(self, info: "InformationSet") -> Tuple[Fraction, Fraction]:
        return self.split_by_disease(self.info_predicate(info))


@lru_cache(maxsize=256)
def oracle_for(params: ModelParams, with_extra: bool = False, strict: bool = True) -> Oracle:
    return Oracle(params, with_extra=with_extra, strict=strict)


def enumerate_outcomes(params: ModelParams, with_extra: bool = False, *, strict: bool = True,
                       include_zero: bool = False) -> List[Tuple[Outcome, Fraction]]:
    """All outcomes with their exact probabilities (zero-mass atoms only on request)."""
    if not include_zero:
        return list(oracle_for(params, with_extra, strict).items())
    if strict:
        require_valid(params)
    t = factor_tables(params)
    den = t.denominator * (t.extra_denominator if with_extra else 1)
    return [(o, Fraction(scaled_weight(t, o), den)) for o in outcome_space(with_extra)]


def conditional(params: ModelParams, target: EventPredicate, given: EventPredicate, *,
                with_extra: bool = False, strict: bool = True) -> Fraction:
    return oracle_for(params, with_extra, strict).conditional(target, given)


def probability(params: ModelParams, event: EventPredicate, *, with_extra: bool = False,
                strict: bool = True) -> Fraction:
    return oracle_for(params, with_extra, strict).mass(event)


# ---------------------------------------------------------------- information sets


@dataclass(frozen=True)
class InformationSet:
    """What the doctor knows when making the final diagnosis."""

    kind: str
    x_doc: Bits
    w_doc: int
    d: int
    a: int
    x_ai: Optional[Bits] = None
    w_ai: Optional[int] = None
    x_e: Optional[Bits] = None

    def __post_init__(self):
        if self.kind not in (INTERPRETABLE, UNINTERPRETABLE):
            raise ValueError(f"unknown information-set kind {self.kind!r}")
        if self.kind == INTERPRETABLE and (self.x_ai is None or self.w_ai is None):
            raise ValueError("an interpretable information set needs x_ai and w_ai")
        if self.kind == UNINTERPRETABLE and (self.x_ai is not None or self.w_ai is not None):
            raise ValueError("an uninterpretable information set cannot carry AI signals")
        object.__setattr__(self, "x_doc", tuple(self.x_doc))
        if self.x_ai is not None:
            object.__setattr__(self, "x_ai", tuple(self.x_ai))
        if self.x_e is not None:
            object.__setattr__(self, "x_e", tuple(self.x_e))

    @property
    def interpretable(self) -> bool:
        return self.kind == INTERPRETABLE

    @property
    def disagreement(self) -> bool:
        return self.d != self.a

    def mirrored(self) -> "InformationSet":
        """Swap the labels L and R everywhere."""
        def flip(b):
            return None if b is None else (b[1], b[0])
        return InformationSet(
            self.kind, flip(self.x_doc), 1 - self.w_doc, self.d, self.a,
            flip(self.x_ai), None if self.w_ai is None else 1 - self.w_ai, flip(self.x_e),
        )


def interpretable_info(x_doc, w_doc, x_ai, w_ai, d=None, a=None, x_e=None) -> InformationSet:
    """Interpretable set with d and a read off the critical-dimension bits when omitted."""
    x_doc, x_ai = tuple(x_doc), tuple(x_ai)
    d = x_doc[w_doc] if d is None else d
    a = x_ai[w_ai] if a is None else a
    return InformationSet(INTERPRETABLE, x_doc, w_doc, d, a, x_ai, w_ai, x_e)


def uninterpretable_info(x_doc, w_doc, d, a, x_e=None) -> InformationSet:
    return InformationSet(UNINTERPRETABLE, tuple(x_doc), w_doc, d, a, None, None, x_e)


def info_predicate(oracle: Oracle, info: InformationSet, *, signals_only: bool = False) -> EventPredicate:
    """Event of an information set; D and A are resolved through the oracle's Bayes tables.

    With ``signals_only`` the doctor's D is not conditioned on (it is a function of
    x_doc and w_doc anyway), which keeps the event fixed when p_doc moves.
    """
    ai_tab = oracle.ai_decisions
    doc_tab = oracle.doctor_decisions

    def pred(o: Outcome) -> bool:
        if o.x_doc != info.x_doc or o.w_doc != info.w_doc:
            return False
        if info.x_e is not None and o.x_e != info.x_e:
            return False
        if info.kind == INTERPRETABLE:
            if o.x_ai != info.x_ai or o.w_ai != info.w_ai:
                return False
        if ai_tab.get((o.x_ai, o.w_ai)) != info.a:
            return False
        if not signals_only and doc_tab.get((o.x_doc, o.w_doc)) != info.d:
            return False
        return True

    return pred


def posterior_disease(params: ModelParams, info: InformationSet, *, strict: bool = True) -> Fraction:
    """Exact P(Z=1 | info); info may include an extra attention signal."""
    return oracle_for(params, info.x_e is not None, strict).posterior(info)


def realizable(params: ModelParams, info: InformationSet, *, strict: bool = True) -> bool:
    o = oracle_for(params, info.x_e is not None, strict)
    return o.raw_mass(o.info_predicate(info)) > 0


def posterior_table(params: ModelParams, kind: str, *, strict: bool = True) -> Dict[tuple, Tuple[Fraction, Fraction]]:
    """Masses (P(Z=0, I), P(Z=1, I)) for every realizable information set of ``kind``.

    Interpretable keys are (x_doc, w_doc, x_ai, w_ai); uninterpretable keys are
    (x_doc, w_doc, a). Both omit d, which is determined by (x_doc, w_doc).
    """
    o = oracle_for(params, False, strict)
    if kind == INTERPRETABLE:
        groups = o.grouped(lambda a: (a.x_doc, a.w_doc, a.x_ai, a.w_ai))
    elif kind == UNINTERPRETABLE:
        ai_tab = o.ai_decisions
        groups = o.grouped(lambda a: (a.x_doc, a.w_doc, ai_tab[(a.x_ai, a.w_ai)]))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    den = o.denominator
    return {k: (Fraction(m[0], den), Fraction(m[1], den)) for k, m in groups.items()}


# ---------------------------------------------------------------- proof events


def union_both(o: Outcome) -> bool:
    """Combined doctor and AI observations show an abnormality in both dimensions."""
    return max(o.x_doc[L], o.x_ai[L]) == 1 and max(o.x_doc[R], o.x_ai[R]) == 1


def attention_event(direction: Tuple[int, int]) -> EventPredicate:
    """Attention difference for a disagreement (d, a).

    For D=0, A=1 it is the AI seeing an abnormality in the doctor's critical
    dimension; for D=1, A=0 it is the two agreeing on the critical dimension.
    """
    if direction == (0, 1):
        return lambda o: o.x_ai[o.w_doc] == 1
    if direction == (1, 0):
        return lambda o: o.w_ai == o.w_doc
    raise ValueError(f"not a disagreement: {direction}")


def comprehension_event(direction: Tuple[int, int]) -> EventPredicate:
    att = attention_event(direction)
    return lambda o: not att(o)


def disease(o: Outcome) -> bool:
    return o.z == 1


# ---------------------------------------------------------------- thresholds in p_doc

NEVER, INTERVAL, ALWAYS = "never", "interval", "always"

TEMPLATES: Dict[str, InformationSet] = {
    "p1": interpretable_info((0, 1), L, (0, 1), R),
    "p1_prime": interpretable_info((0, 0), L, (0, 1), R),
    "p1_dprime": interpretable_info((0, 1), L, (0, 1), R),
    "p2": uninterpretable_info((0, 1), L, 0, 1),
    "p2_prime": uninterpretable_info((0, 1), L, 0, 1),
    "p3": interpretable_info((1, 0), L, (0, 0), R),
    "p4": uninterpretable_info((1, 0), L, 1, 0),
}


@dataclass(frozen=True)
class ThresholdSolution:
    """Crossing point of P(Z=1 | template) = 1/2 as a function of p_doc.

    ``root`` is the unclamped solution of the linear equation (None when the
    posterior does not depend on p_doc). ``kind`` classifies the set of
    p_doc in [1/2, 1] where the posterior is at least 1/2.
    """

    root: Optional[Fraction]
    kind: str
    direction: str
    bisection: Tuple[Fraction, Fraction]


def _template_atoms(params: ModelParams, template: InformationSet) -> List[Outcome]:
    ref = oracle_for(params, template.x_e is not None, False)
    pred = ref.info_predicate(template, signals_only=True)
    return [o for o in outcome_space(template.x_e is not None) if o.z == o.x[o.w] and pred(o)]


def _gap(params: ModelParams, atoms: List[Outcome], p_doc: Fraction) -> Fraction:
    """P(Z=1, T) - P(Z=0, T) evaluated directly at p_doc."""
    q = params.with_(p_doc=p_doc)
    t = factor_tables(q)
    den = t.denominator * (t.extra_denominator if atoms and atoms[0].x_e is not None else 1)
    total = 0
    for o in atoms:
        w = scaled_weight(t, o)
        total += w if o.z else -w
    return Fraction(total, den)


def resolve_template(template: Union[str, InformationSet]) -> InformationSet:
    if isinstance(template, str):
        try:
            return TEMPLATES[template]
        except KeyError:
            raise ValueError(f"unknown template {template!r}; known: {sorted(TEMPLATES)}") from None
    return template


def exact_threshold_in_p_doc(params: ModelParams, template: Union[str, InformationSet], *,
                             tol_exp: int = 40) -> ThresholdSolution:
    """Solve P(Z=1 | template) = 1/2 for p_doc exactly, then cross-check by bisection.

    p_doc only enters through the doctor's comprehension factor, so both joint
    masses are affine in p_doc; the solve uses their values at 0 and 1. The
    affine form is re-verified at two interior points before it is trusted.
    """
    template = resolve_template(template)
    atoms = _template_atoms(params, template)
    g0 = _gap(params, atoms, Fraction(0))
    g1 = _gap(params, atoms, Fraction(1))
    slope = g1 - g0
    for probe in (HALF, Fraction(3, 4), params.p_doc):
        if _gap(params, atoms, probe) != g0 + slope * probe:
            raise NonMonotonePosterior(f"joint masses are not affine in p_doc at {probe}")
    if not atoms or all(_mass_at(params, atoms, p) == 0 for p in (Fraction(0), HALF, Fraction(1))):
        raise NullEvent("template has probability zero for every p_doc")

    root = None if slope == 0 else -g0 / slope
    direction = "constant" if slope == 0 else ("decreasing" if slope < 0 else "increasing")
    g_half = g0 + slope * HALF
    if g_half >= 0 and g1 >= 0:
        kind = ALWAYS
    elif g_half < 0 and g1 < 0:
        kind = NEVER
    else:
        kind = INTERVAL

    tol = Fraction(1, 2**tol_exp)
    if (g_half >= 0) != (g1 >= 0):
        lo, hi = bisect_gap(params, atoms, HALF, Fraction(1), tol)
        if root is None or not lo <= root <= hi:
            raise NonMonotonePosterior(f"bisection bracket [{lo}, {hi}] misses the solved root {root}")
    else:
        lo, hi = HALF, Fraction(1)
        probes = [HALF + Fraction(k, 32) for k in range(17)]
        signs = {_gap(params, atoms, q) >= 0 for q in probes}
        if len(signs) != 1:
            raise NonMonotonePosterior("posterior crosses 1/2 in [1/2, 1] but the solved root lies outside")
    return ThresholdSolution(root, kind, direction, (lo, hi))


def _mass_at(params: ModelParams, atoms: List[Outcome], p_doc: Fraction) -> int:
    t = factor_tables(params.with_(p_doc=p_doc))
    return sum(scaled_weight(t, o) for o in atoms)


def bisect_gap(params: ModelParams, atoms: List[Outcome], lo: Fraction, hi: Fraction,
               tol: Fraction) -> Tuple[Fraction, Fraction]:
    """Shrink [lo, hi] around the sign change of the gap until its width is at most tol."""
    s_lo = _gap(params, atoms, lo) >= 0
    s_hi = _gap(params, atoms, hi) >= 0
    if s_lo == s_hi:
        raise NonMonotonePosterior("no sign change to bisect")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if (_gap(params, atoms, mid) >= 0) == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


__all__ = [
    "Oracle", "oracle_for", "enumerate_outcomes", "conditional", "probability", "outcome_space",
    "InformationSet", "interpretable_info", "uninterpretable_info", "info_predicate",
    "posterior_disease", "realizable", "posterior_table", "union_both", "attention_event",
    "comprehension_event", "disease", "TEMPLATES", "ThresholdSolution", "exact_threshold_in_p_doc",
    "bisect_gap", "resolve_template", "NEVER", "INTERVAL", "ALWAYS", "INTERPRETABLE",
    "UNINTERPRETABLE", "EventPredicate", "BITS", "InvalidParams", "Unrealizable",
]
