"""Decision rules for the doctor and the AI.

Every diagnosis is positive iff its likelihood ratio P(Z=1|.)/P(Z=0|.) is at
least one. Ratios come from the displayed closed forms whenever a signal
profile matches one of them, with the doctor's critical dimension mirrored
to L. Profiles no display covers use the factorized likelihood: a sum over
the critical dimension W and the noise bit X_{-W} of the product of signal
likelihoods, with A = X^AI at W^AI substituted for the AI's decision.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple

from .errors import InvalidParams, InvariantViolation, Unrealizable
from .model import L, R, Bits, ModelParams, require_valid
from .rational import INF, Ratio, ratio

FACTORIZED = "factorized"


@dataclass(frozen=True)
class DiagnosisRecord:
    d: int
    a: int
    f: int
    ratio: Ratio
    source: str


@lru_cache(maxsize=1024)
def _checked(p: ModelParams) -> ModelParams:
    return require_valid(p)


def _bits(b) -> Bits:
    b = tuple(int(v) for v in b)
    if len(b) != 2 or any(v not in (0, 1) for v in b):
        raise ValueError(f"expected a bit pair, got {b}")
    return b


def _flip(b: Bits) -> Bits:
    return (b[1], b[0])


def _to_left(w_ref: int, *pairs: Bits) -> Tuple[Bits, ...]:
    """Relabel dimensions so that the reference dimension becomes L."""
    if w_ref == L:
        return pairs
    return tuple(_flip(b) for b in pairs)


# ---------------------------------------------------------------- signal likelihoods


def _doc_lik(pi: Fraction, seen: int, truth: int) -> Fraction:
    if truth:
        return pi if seen else 1 - pi
    return Fraction(0) if seen else Fraction(1)


def _ai_lik(p: ModelParams, seen: int, truth: int) -> Fraction:
    if truth:
        return p.pi_ai if seen else 1 - p.pi_ai
    return 1 - p.phi_ai if seen else p.phi_ai


def _ai_positive(p: ModelParams, truth: int) -> Fraction:
    """P(X^AI_j = 1 | X_j = truth)."""
    return p.pi_ai if truth else 1 - p.phi_ai


def _states(p: ModelParams, z: int):
    """(w, x, weight) with weight = P(Z=z) P(W=w) P(X_{-W})."""
    prior = p.gamma if z else 1 - p.gamma
    for w in (L, R):
        for other in (0, 1):
            x = (z, other) if w == L else (other, z)
            yield w, x, prior / 2 * (p.lam if other else 1 - p.lam)


def _comp(q: Fraction, guess: int, w: int) -> Fraction:
    return q if guess == w else 1 - q


def factorized_masses_doctor(p: ModelParams, x_doc: Bits, w_doc: int) -> Tuple[Fraction, Fraction]:
    out = []
    for z in (0, 1):
        total = Fraction(0)
        for w, x, base in _states(p, z):
            total += (base * _doc_lik(p.pi_doc, x_doc[L], x[L]) * _doc_lik(p.pi_doc, x_doc[R], x[R])
                      * _comp(p.p_doc, w_doc, w))
        out.append(total)
    return out[0], out[1]


def factorized_masses_ai(p: ModelParams, x_ai: Bits, w_ai: int) -> Tuple[Fraction, Fraction]:
    out = []
    for z in (0, 1):
        total = Fraction(0)
        for w, x, base in _states(p, z):
            total += base * _ai_lik(p, x_ai[L], x[L]) * _ai_lik(p, x_ai[R], x[R]) * _comp(p.p_ai, w_ai, w)
        out.append(total)
    return out[0], out[1]


def factorized_masses_interpretable(p: ModelParams, x_doc: Bits, w_doc: int, x_ai: Bits,
                                    w_ai: int) -> Tuple[Fraction, Fraction]:
    """(P(Z=0, signals), P(Z=1, signals)) summed over W and the noise bit."""
    out = []
    for z in (0, 1):
        total = Fraction(0)
        for w, x, base in _states(p, z):
            term = base * _comp(p.p_doc, w_doc, w) * _comp(p.p_ai, w_ai, w)
            for j in (L, R):
                term *= _doc_lik(p.pi_doc, x_doc[j], x[j]) * _ai_lik(p, x_ai[j], x[j])
            total += term
        out.append(total)
    return out[0], out[1]


def factorized_masses_uninterpretable(p: ModelParams, x_doc: Bits, w_doc: int,
                                      a: int) -> Tuple[Fraction, Fraction]:
    """(P(Z=0, X^Doc, W^Doc, A=a), P(Z=1, ...)) using A = X^AI at W^AI."""
    out = []
    for z in (0, 1):
        total = Fraction(0)
        for w, x, base in _states(p, z):
            pos = p.p_ai * _ai_positive(p, x[w]) + (1 - p.p_ai) * _ai_positive(p, x[1 - w])
            term = (base * _comp(p.p_doc, w_doc, w) * (pos if a else 1 - pos)
                    * _doc_lik(p.pi_doc, x_doc[L], x[L]) * _doc_lik(p.pi_doc, x_doc[R], x[R]))
            total += term
        out.append(total)
    return out[0], out[1]


def _factorized_ratio(masses: Tuple[Fraction, Fraction]) -> Ratio:
    m0, m1 = masses
    if m0 == 0 and m1 == 0:
        raise Unrealizable("signal profile has probability zero")
    return ratio(m1, m0)


# ---------------------------------------------------------------- initial diagnoses


def _single_agent_display(g, lam, pi, q, x: Bits) -> Tuple[Ratio, str]:
    """Four-case likelihood ratio for one agent with critical guess L and no hallucination."""
    if x == (1, 1):
        return INF, "case-i"
    if x == (0, 0):
        return ratio(g * (1 - pi), 1 - g), "case-ii"
    if x == (1, 0):
        return ratio(g * (q * (1 - lam * pi) + (1 - q) * lam * (1 - pi)), (1 - g) * (1 - q) * lam), "case-iii"
    return ratio(g * (q * (1 - pi) * lam + (1 - q) * (1 - lam * pi)), (1 - g) * q * lam), "case-iv"


def doctor_ratio(p: ModelParams, x_doc, w_doc: int) -> Tuple[Ratio, str]:
    x_doc = _bits(x_doc)
    _factorized_ratio(factorized_masses_doctor(p, x_doc, w_doc))
    (xl,) = _to_left(w_doc, x_doc)
    r, case = _single_agent_display(p.gamma, p.lam, p.pi_doc, p.p_doc, xl)
    return r, f"doctor-{case}"


def initial_diagnosis(p: ModelParams, x_doc, w_doc: int) -> int:
    """1 iff the doctor sees an abnormality in her critical dimension."""
    _checked(p)
    x_doc = _bits(x_doc)
    r, _ = doctor_ratio(p, x_doc, w_doc)
    d = int(r >= 1)
    if d != x_doc[w_doc]:
        raise InvariantViolation(
            f"Bayes initial diagnosis {d} differs from the critical-dimension rule",
            counterexample={"params": p.describe(), "x_doc": x_doc, "w_doc": w_doc},
        )
    return d


def _ai_hallucination_display(p: ModelParams, x: Bits) -> Tuple[Ratio, str]:
    g, lam, a, q, f = p.gamma, p.lam, p.pi_ai, p.p_ai, p.phi_ai
    if x == (1, 1):
        return ratio(g * a, (1 - g) * (1 - f)), "ai-halluc-i"
    if x == (0, 0):
        return ratio(g * (1 - a), (1 - g) * f), "ai-halluc-ii"
    if x == (1, 0):
        num = g * (1 - lam) * q * a * f + g * (1 - a) * (lam * q * a + (1 - q) * (lam * a + (1 - lam) * (1 - f)))
        den = (lam * (1 - g) * (1 - q) * a * f
               + (1 - g) * (1 - f) * ((1 - lam) * (1 - q) * f + q * (lam * (1 - a) + (1 - lam) * f)))
        return ratio(num, den), "ai-halluc-iii"
    num = g * a * (lam * q * (1 - a) + (1 - q) * (1 - lam * a)) + g * (1 - lam) * (1 - f) * (q - a)
    den = lam * (1 - g) * q * a + (1 - g) * (1 - f) * (lam * (1 - q) - lam * a + (1 - lam) * f)
    return ratio(num, den), "ai-halluc-iv"


def ai_ratio(p: ModelParams, x_ai, w_ai: int) -> Tuple[Ratio, str]:
    x_ai = _bits(x_ai)
    _factorized_ratio(factorized_masses_ai(p, x_ai, w_ai))
    (xl,) = _to_left(w_ai, x_ai)
    if p.phi_ai == 1:
        r, case = _single_agent_display(p.gamma, p.lam, p.pi_ai, p.p_ai, xl)
        return r, f"ai-{case}"
    return _ai_hallucination_display(p, xl)


def ai_diagnosis(p: ModelParams, x_ai, w_ai: int) -> int:
    """1 iff the AI sees an abnormality in its critical dimension."""
    _checked(p)
    x_ai = _bits(x_ai)
    r, _ = ai_ratio(p, x_ai, w_ai)
    a = int(r >= 1)
    if a != x_ai[w_ai]:
        raise InvariantViolation(
            f"Bayes AI diagnosis {a} differs from the critical-dimension rule",
            counterexample={"params": p.describe(), "x_ai": x_ai, "w_ai": w_ai},
        )
    return a


# ---------------------------------------------------------------- interpretable AI


def _attention_ratio(g, lam, d, a, pd, pa):
    return ratio(g * (pd * pa * (1 - lam) + lam * (1 - d) * (1 - a) * (1 - pd - pa + 2 * pd * pa)),
                 (1 - g) * (1 - pd) * (1 - pa) * lam)


def _comprehension_01_ratio(g, lam, d, a, pd, pa):
    return ratio(g * (pa * (1 - pd) * (1 - lam) + lam * (1 - d) * (1 - a) * (pd + pa - 2 * pd * pa)),
                 (1 - g) * pd * (1 - pa) * lam)


def _comprehension_10_ratio(g, lam, d, a, pd, pa):
    return ratio(g * (pd * (1 - pa) * (1 - lam) + lam * (1 - d) * (1 - a) * (pd + pa - 2 * pd * pa)),
                 (1 - g) * pa * (1 - pd) * lam)


def _interpretable_display(p: ModelParams, xd: Bits, xa: Bits, wa: int) -> Optional[Tuple[Ratio, str]]:
    """Closed-form ratio for a W^Doc = L profile, or None when no display applies."""
    g, lam, d, a, pd, pa, f = p.gamma, p.lam, p.pi_doc, p.pi_ai, p.p_doc, p.p_ai, p.phi_ai
    both = max(xd[L], xa[L]) == 1 and max(xd[R], xa[R]) == 1
    dd, aa = xd[L], xa[wa]
    if f == 1:
        if dd == 0 and aa == 1:
            if xa[L] == 1:
                return (INF, "both-abnormal") if both else (_attention_ratio(g, lam, d, a, pd, pa), "attention-01")
            return _comprehension_01_ratio(g, lam, d, a, pd, pa), "comprehension-01"
        if dd == 1 and aa == 0:
            if both:
                return INF, "both-abnormal"
            if wa == L:
                return _attention_ratio(g, lam, d, a, pd, pa), "attention-10"
            return _comprehension_10_ratio(g, lam, d, a, pd, pa), "comprehension-10"
        return None
    if not (dd == 0 and aa == 1):
        return None
    if xa[L] == 1:
        if xd == (0, 0) and xa == (1, 0):
            num = (g * (1 - lam) * pd * pa * a * (1 - d) * f
                   + g * (1 - d) * (1 - a) * (lam * pd * pa * a * (1 - d)
                                              + (1 - pd) * (1 - pa) * (lam * a * (1 - d) + (1 - lam) * (1 - f))))
            den = (lam * (1 - g) * (1 - pd) * (1 - pa) * a * (1 - d) * f
                   + (1 - g) * (1 - f) * ((1 - lam) * (1 - pd) * (1 - pa) * f
                                          + pd * pa * (lam * (1 - d) * (1 - a) + (1 - lam) * f)))
            return ratio(num, den), "halluc-atten-i"
        if xd == (0, 0):
            return ratio(g * a * (1 - d), (1 - g) * (1 - f)), "halluc-atten-ii-iii"
        if wa == L:
            num = g * (lam * pd * pa * a * (1 - d) + (1 - pd) * (1 - pa) * (lam * a * (1 - d) + (1 - lam) * (1 - f)))
            return ratio(num, lam * (1 - g) * pd * pa * (1 - f)), "halluc-atten-iv-v"
        num = g * (lam * pd * (1 - pa) * a * (1 - d) + pa * (1 - pd) * (lam * a * (1 - d) + (1 - lam) * (1 - f)))
        return ratio(num, lam * (1 - g) * pd * (1 - pa) * (1 - f)), "halluc-atten-vi"
    if xd == (0, 1):
        num = g * (lam * pd * (1 - pa) * (1 - d) * (1 - a) + lam * pa * (1 - pd) * (1 - d) * (1 - a)
                   + (1 - lam) * pa * (1 - pd) * f)
        return ratio(num, lam * (1 - g) * pd * (1 - pa) * f), "halluc-comp-ii"
    return None


def lr_interpretable(p: ModelParams, x_doc, w_doc: int, x_ai, w_ai: int) -> Ratio:
    return _lr_interpretable(p, x_doc, w_doc, x_ai, w_ai)[0]


def _lr_interpretable(p: ModelParams, x_doc, w_doc: int, x_ai, w_ai: int) -> Tuple[Ratio, str]:
    _checked(p)
    x_doc, x_ai = _bits(x_doc), _bits(x_ai)
    fact = _factorized_ratio(factorized_masses_interpretable(p, x_doc, w_doc, x_ai, w_ai))
    xd, xa = _to_left(w_doc, x_doc, x_ai)
    wa = L if w_ai == w_doc else R
    shown = _interpretable_display(p, xd, xa, wa)
    if shown is None:
        return fact, FACTORIZED
    return shown


def final_interpretable(p: ModelParams, x_doc, w_doc: int, x_ai, w_ai: int) -> DiagnosisRecord:
    """Final diagnosis when the doctor sees the AI's signals."""
    d = initial_diagnosis(p, x_doc, w_doc)
    a = ai_diagnosis(p, x_ai, w_ai)
    r, source = _lr_interpretable(p, x_doc, w_doc, x_ai, w_ai)
    return DiagnosisRecord(d, a, int(r >= 1), r, source)


# ---------------------------------------------------------------- uninterpretable AI


def _uninterpretable_display(p: ModelParams, xd: Bits, d_: int, a_: int) -> Optional[Tuple[Ratio, str]]:
    g, lam, d, a, pd, pa, f = p.gamma, p.lam, p.pi_doc, p.pi_ai, p.p_doc, p.p_ai, p.phi_ai
    if d_ == 0 and a_ == 1:
        if f == 1:
            if xd == (0, 0):
                return ratio(g * (pa * (1 - lam * d) + (1 - pa) * lam * (1 - d)), (1 - g) * (1 - pa) * lam), "unint-01-i"
            num = g * (lam * (1 - d) * (pd * pa + 1 - pa) + pa * (1 - pd) * (1 - lam * d))
            return ratio(num, (1 - g) * pd * (1 - pa) * lam), "unint-01-ii"
        if xd == (0, 0):
            num = g * (1 - d) * (pa * a * (1 - lam * d) + (1 - pa) * (lam * (1 - d) * a + (1 - lam) * (1 - f)))
            den = (lam * (1 - g) * (1 - pa) * a * (1 - d)
                   + (1 - g) * (1 - f) * (pa * (1 - lam * d) + (1 - lam) * (1 - pa)))
            return ratio(num, den), "unint-halluc-01-i"
        num = g * (lam * a * (1 - d) + (1 - lam) * (1 - pd) * (pa * a + (1 - pa) * (1 - f)))
        return ratio(num, lam * (1 - g) * pd * (pa * (1 - f) + (1 - pa) * a)), "unint-halluc-01-ii"
    if d_ == 1 and a_ == 0 and f == 1:
        if xd == (1, 1):
            return INF, "unint-10-certain"
        num = g * (lam * (1 - d) * (1 - a) + pd * (1 - pa) * (1 - lam) + pd * pa * (1 - a) * (1 - lam))
        den = (1 - g) * lam * (pa * (1 - pd) + (1 - pd) * (1 - pa) * (1 - a))
        return ratio(num, den), "unint-10"
    return None


def lr_uninterpretable(p: ModelParams, x_doc, w_doc: int, a: int) -> Ratio:
    return _lr_uninterpretable(p, x_doc, w_doc, a)[0]


def _lr_uninterpretable(p: ModelParams, x_doc, w_doc: int, a: int) -> Tuple[Ratio, str]:
    _checked(p)
    x_doc = _bits(x_doc)
    fact = _factorized_ratio(factorized_masses_uninterpretable(p, x_doc, w_doc, a))
    (xd,) = _to_left(w_doc, x_doc)
    shown = _uninterpretable_display(p, xd, xd[L], a)
    if shown is None:
        return fact, FACTORIZED
    return shown


def final_uninterpretable(p: ModelParams, x_doc, w_doc: int, d: int, a: int) -> DiagnosisRecord:
    """Final diagnosis when the doctor sees only the AI's diagnosis.

    With agreement (d == a) the doctor keeps d.
    """
    x_doc = _bits(x_doc)
    d0 = initial_diagnosis(p, x_doc, w_doc)
    if d != d0:
        raise Unrealizable(f"initial diagnosis {d} is inconsistent with x_doc={x_doc}, w_doc={w_doc}")
    if a not in (0, 1):
        raise ValueError(f"AI diagnosis must be a bit, got {a}")
    r, source = _lr_uninterpretable(p, x_doc, w_doc, a)
    if d == a:
        return DiagnosisRecord(d, a, d, r, source + "+agreement")
    return DiagnosisRecord(d, a, int(r >= 1), r, source)


__all__ = [
    "DiagnosisRecord", "initial_diagnosis", "ai_diagnosis", "lr_interpretable", "lr_uninterpretable",
    "final_interpretable", "final_uninterpretable", "doctor_ratio", "ai_ratio",
    "factorized_masses_interpretable", "factorized_masses_uninterpretable",
    "factorized_masses_doctor", "factorized_masses_ai", "FACTORIZED", "InvalidParams",
]
