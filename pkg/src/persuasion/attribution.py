"""Bayesian attribution of a disagreement to an attention or a comprehension difference.

For D=0, A=1 the attention difference is the AI seeing an abnormality in the
doctor's critical dimension. For D=1, A=0 it is the AI sharing the doctor's
critical dimension. Everything else is a comprehension difference, so the two
sources are mutually exclusive.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .diagnosis import factorized_masses_interpretable
from .errors import NullEvent, Unrealizable
from .model import L, ModelParams, require_valid
from .oracle import BITS, InformationSet, attention_event, comprehension_event, oracle_for

ATTEN, COMP = "atten", "comp"


@dataclass(frozen=True)
class AttributionRecord:
    w_atten: Fraction
    w_comp: Fraction
    post_atten: Optional[Fraction]
    post_comp: Optional[Fraction]
    post_total: Fraction

    def weighted_total(self) -> Fraction:
        total = Fraction(0)
        if self.w_atten:
            total += self.w_atten * self.post_atten
        if self.w_comp:
            total += self.w_comp * self.post_comp
        return total

    def identity_holds(self) -> bool:
        return self.w_atten + self.w_comp == 1 and self.weighted_total() == self.post_total

    def sandwiched(self) -> bool:
        posts = [q for q, w in ((self.post_atten, self.w_atten), (self.post_comp, self.w_comp)) if w]
        return min(posts) <= self.post_total <= max(posts)


def _direction(info: InformationSet) -> Tuple[int, int]:
    if not info.disagreement:
        raise Unrealizable(f"attribution needs a disagreement, got d={info.d}, a={info.a}")
    return info.d, info.a


def _source_event(direction, source: str):
    if source == ATTEN:
        return attention_event(direction)
    if source == COMP:
        return comprehension_event(direction)
    raise ValueError(f"source must be {ATTEN!r} or {COMP!r}, got {source!r}")


def attribution_weights(p: ModelParams, info: InformationSet) -> Tuple[Fraction, Fraction]:
    """(P(Atten | info), P(Comp | info)) from the enumeration oracle."""
    require_valid(p)
    direction = _direction(info)
    o = oracle_for(p, info.x_e is not None)
    given = o.info_predicate(info)
    try:
        w_atten = o.conditional(attention_event(direction), given)
    except NullEvent:
        raise NullEvent(f"disagreement has probability zero: {info}") from None
    return w_atten, 1 - w_atten


def source_conditional_posterior(p: ModelParams, info: InformationSet, source: str) -> Fraction:
    """P(Z=1 | source, info)."""
    require_valid(p)
    direction = _direction(info)
    o = oracle_for(p, info.x_e is not None)
    base = o.info_predicate(info)
    event = _source_event(direction, source)
    try:
        return o.conditional(lambda a: a.z == 1, lambda a: base(a) and event(a))
    except NullEvent:
        raise NullEvent(f"source {source!r} has probability zero given {info}") from None


def decompose(p: ModelParams, info: InformationSet) -> AttributionRecord:
    """Weights, source-conditional posteriors and the overall posterior of a disagreement."""
    w_atten, w_comp = attribution_weights(p, info)
    post_atten = source_conditional_posterior(p, info, ATTEN) if w_atten else None
    post_comp = source_conditional_posterior(p, info, COMP) if w_comp else None
    total = oracle_for(p, info.x_e is not None).posterior(info)
    return AttributionRecord(w_atten, w_comp, post_atten, post_comp, total)


# ---------------------------------------------------------------- closed-form path


def _display_odds(p: ModelParams, xd, direction) -> Optional[Fraction]:
    """Atten/Comp odds from the displayed formulas (W^Doc = L, no hallucination)."""
    g, lam, d, a, pd, pa = p.gamma, p.lam, p.pi_doc, p.pi_ai, p.p_doc, p.p_ai
    mix = pd + pa - 2 * pd * pa
    if direction == (0, 1) and xd == (0, 1):
        num = g * lam * (1 - d) * (pd * pa + (1 - pd) * (1 - pa) + a * mix)
        den = g * (1 - lam) * pa * (1 - pd) + lam * (1 - g) * pd * (1 - pa) + g * lam * (1 - d) * (1 - a) * mix
        return None if den == 0 else num / den
    if direction == (1, 0) and xd == (1, 0):
        comp = g * (1 - lam) * pd * (1 - pa) + lam * (1 - g) * pa * (1 - pd) + g * lam * (1 - d) * (1 - a) * mix
        att = (g * (1 - lam) * pd * pa * (1 - a) + lam * (1 - g) * (1 - pd) * (1 - pa) * (1 - a)
               + g * lam * (1 - d) * (1 - a) * (pd * pa + (1 - pd) * (1 - pa)))
        return None if comp == 0 else att / comp
    return None


def closed_form_weights(p: ModelParams, info: InformationSet) -> Tuple[Fraction, Fraction]:
    """Attribution weights without the oracle.

    Uses the displayed odds where one applies and otherwise sums factorized
    likelihoods over the AI signals consistent with the information set.
    """
    require_valid(p)
    direction = _direction(info)
    xd = info.x_doc if info.w_doc == L else (info.x_doc[1], info.x_doc[0])
    if p.phi_ai == 1 and not info.interpretable:
        odds = _display_odds(p, xd, direction)
        if odds is not None:
            return odds / (1 + odds), 1 / (1 + odds)
    att = comp = Fraction(0)
    cells = [(info.x_ai, info.w_ai)] if info.interpretable else [(x, w) for x in BITS for w in (0, 1)]
    for x_ai, w_ai in cells:
        if x_ai[w_ai] != info.a:
            continue
        m0, m1 = factorized_masses_interpretable(p, info.x_doc, info.w_doc, x_ai, w_ai)
        is_att = x_ai[info.w_doc] == 1 if direction == (0, 1) else w_ai == info.w_doc
        if is_att:
            att += m0 + m1
        else:
            comp += m0 + m1
    if att + comp == 0:
        raise NullEvent(f"disagreement has probability zero: {info}")
    return att / (att + comp), comp / (att + comp)


__all__ = [
    "AttributionRecord", "attribution_weights", "source_conditional_posterior", "decompose",
    "closed_form_weights", "ATTEN", "COMP",
]
