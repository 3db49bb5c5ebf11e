"""Model primitives: parameters, assumption checks, and the joint law of an outcome.

A patient has a disease indicator Z and two abnormality bits X = (X_L, X_R).
One dimension W is critical and X_W = Z; the other is noise with rate lambda.
The doctor and the AI each receive an attention signal (a noisy copy of X that
can miss abnormalities) and a comprehension signal (a guess of W).
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Optional, Tuple

from .errors import InvalidParams
from .rational import HALF, ONE, ZERO, to_fraction

L, R = 0, 1
DIM_NAMES = ("L", "R")

Bits = Tuple[int, int]


@dataclass(frozen=True)
class ModelParams:
    gamma: Fraction
    lam: Fraction
    pi_doc: Fraction
    p_doc: Fraction
    pi_ai: Fraction
    p_ai: Fraction
    phi_ai: Fraction = ONE
    pi_bar: Optional[Fraction] = None

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            value = to_fraction(value)
            if not 0 <= value <= 1:
                raise InvalidParams(f"{f.name}={value} is outside [0, 1]", [f.name])
            object.__setattr__(self, f.name, value)

    @property
    def pi_bar_effective(self) -> Fraction:
        return self.pi_doc if self.pi_bar is None else self.pi_bar

    @property
    def hallucinates(self) -> bool:
        return self.phi_ai < 1

    def with_(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        out = {
            "gamma": self.gamma,
            "lambda": self.lam,
            "pi_doc": self.pi_doc,
            "p_doc": self.p_doc,
            "pi_ai": self.pi_ai,
            "p_ai": self.p_ai,
            "phi_ai": self.phi_ai,
        }
        if self.pi_bar is not None:
            out["pi_bar"] = self.pi_bar
        return out

    def describe(self) -> dict:
        return {k: str(v) for k, v in self.as_dict().items()}


PARAM_KEYS = ("gamma", "lambda", "pi_doc", "p_doc", "pi_ai", "p_ai", "phi_ai", "pi_bar")
EXTRA_KEYS = ("tau", "p_doc_high", "p_doc_low", "cost")


def params_from_mapping(data: dict, *, defaults: Optional[dict] = None) -> Tuple[ModelParams, dict]:
    """Build ModelParams from the flat JSON schema; returns (params, extras)."""
    merged = dict(defaults or {})
    merged.update(data)
    unknown = set(merged) - set(PARAM_KEYS) - set(EXTRA_KEYS)
    if unknown:
        raise InvalidParams(f"unknown parameter keys: {sorted(unknown)}", sorted(unknown))
    missing = [k for k in PARAM_KEYS[:6] if k not in merged]
    if missing:
        raise InvalidParams(f"missing parameter keys: {missing}", missing)
    try:
        kwargs = {
            "gamma": to_fraction(merged["gamma"]),
            "lam": to_fraction(merged["lambda"]),
            "pi_doc": to_fraction(merged["pi_doc"]),
            "p_doc": to_fraction(merged["p_doc"]),
            "pi_ai": to_fraction(merged["pi_ai"]),
            "p_ai": to_fraction(merged["p_ai"]),
        }
        if merged.get("phi_ai") is not None:
            kwargs["phi_ai"] = to_fraction(merged["phi_ai"])
        if merged.get("pi_bar") is not None:
            kwargs["pi_bar"] = to_fraction(merged["pi_bar"])
        extras = {k: to_fraction(merged[k]) for k in EXTRA_KEYS if merged.get(k) is not None}
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, InvalidParams):
            raise
        raise InvalidParams(f"malformed parameter value: {exc}") from exc
    return ModelParams(**kwargs), extras


def load_params(path) -> Tuple[ModelParams, dict]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParams(f"cannot read parameter file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidParams("parameter file must hold a flat JSON object")
    return params_from_mapping(data)


class Outcome(NamedTuple):
    """One joint realization of the state and every signal."""

    z: int
    x: Bits
    w: int
    x_doc: Bits
    w_doc: int
    x_ai: Bits
    w_ai: int
    x_e: Optional[Bits] = None

    @property
    def x_l(self) -> int:
        return self.x[L]

    @property
    def x_r(self) -> int:
        return self.x[R]


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> Tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def failed(self, name: str) -> bool:
        return any(c.name == name and not c.passed for c in self.checks)

    def summary(self) -> str:
        return "; ".join(f"{c.name}: {c.detail}" for c in self.failures) or "all assumptions hold"


def _skill_slope(p: ModelParams) -> Optional[Fraction]:
    if p.gamma == 0 or p.lam == 0:
        return None
    return 1 / p.gamma + 1 / p.lam - 2


def feasible_comprehension_floor(p: ModelParams, role: str) -> Fraction:
    """Strict lower bound on the comprehension skill of ``role`` (doctor or ai)."""
    pi = _attention(p, role)
    slope = _skill_slope(p)
    if slope is None or slope <= 0:
        raise InvalidParams("the comprehension floor needs 0 < lambda and gamma < 1/2")
    return (1 / p.lam - pi) / slope


def _attention(p: ModelParams, role: str) -> Fraction:
    if role == "doctor":
        return p.pi_doc
    if role == "ai":
        return p.pi_ai
    raise ValueError(f"role must be 'doctor' or 'ai', got {role!r}")


def phi_ai_terms(p: ModelParams) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    g, lam, pa, qa = p.gamma, p.lam, p.pi_ai, p.p_ai
    pb = p.pi_bar_effective
    k = g * lam / (1 - g)
    return (
        g / (1 - g),
        1 - k * pa * (1 - pa),
        1 - k * pa * (1 - pa) * (1 - pb) ** 2,
        1 - g * lam / (g + lam - 2 * g * lam) * pa * (1 - pb) * (2 * qa - 1) * (1 - pa),
    )


def phi_ai_floor(p: ModelParams) -> Fraction:
    """The hallucination bound: phi_ai must strictly exceed this value."""
    return max(phi_ai_terms(p))


def validate_params(p: ModelParams) -> ValidationReport:
    checks = [Check("structure", True, "X_W = Z and uniform W hold by construction")]

    a3 = 0 < p.lam <= p.gamma < HALF
    checks.append(Check("prior-noise", a3, f"need 0 < lambda <= gamma < 1/2, got lambda={p.lam}, gamma={p.gamma}"))

    a2 = HALF <= p.p_doc <= 1 and HALF <= p.p_ai <= 1
    checks.append(Check("comprehension-range", a2, f"need p_doc, p_ai in [1/2, 1], got p_doc={p.p_doc}, p_ai={p.p_ai}"))

    slope = _skill_slope(p)
    for role, pi, skill in (("doctor", p.pi_doc, p.p_doc), ("ai", p.pi_ai, p.p_ai)):
        if slope is None:
            checks.append(Check(f"skill-{role}", False, "undefined when gamma or lambda is zero"))
            continue
        lhs = slope * skill + pi
        rhs = 1 / p.lam
        checks.append(Check(
            f"skill-{role}", lhs > rhs,
            f"(1/gamma + 1/lambda - 2)*{skill} + {pi} = {lhs} must exceed 1/lambda = {rhs}",
        ))

    if p.phi_ai < 1:
        pb = p.pi_bar_effective
        checks.append(Check(
            "hallucination-attention", p.pi_doc <= pb < 1,
            f"need pi_doc <= pi_bar < 1, got pi_doc={p.pi_doc}, pi_bar={pb}",
        ))
        if 0 < p.gamma < 1 and 0 < p.lam:
            floor = phi_ai_floor(p)
            checks.append(Check("hallucination-rate", p.phi_ai > floor, f"phi_ai={p.phi_ai} must exceed {floor}"))
        else:
            checks.append(Check("hallucination-rate", False, "bound undefined for degenerate gamma or lambda"))
    return ValidationReport(tuple(checks))


def require_valid(p: ModelParams) -> ModelParams:
    report = validate_params(p)
    if not report.ok:
        raise InvalidParams(f"invalid parameters: {report.summary()}", [c.name for c in report.failures])
    return p


# ---------------------------------------------------------------- joint law


class FactorTables(NamedTuple):
    """Integer-scaled factor values sharing one common denominator."""

    prior: Tuple[int, int]
    noise: Tuple[int, int]
    doc: Tuple[Tuple[int, int], Tuple[int, int]]
    comp_doc: Tuple[int, int]
    ai: Tuple[Tuple[int, int], Tuple[int, int]]
    comp_ai: Tuple[int, int]
    denominator: int
    extra_denominator: int


def _split(q: Fraction) -> Tuple[int, int]:
    return q.numerator, q.denominator


def factor_tables(p: ModelParams) -> FactorTables:
    gn, gd = _split(p.gamma)
    ln, ld = _split(p.lam)
    dn, dd = _split(p.pi_doc)
    cn, cd = _split(p.p_doc)
    an, ad = _split(p.pi_ai)
    fn, fd = _split(p.phi_ai)
    kn, kd = _split(p.p_ai)
    # doc[x][report]: scaled P(report | true bit x); the doctor never reports a phantom
    doc = ((dd, 0), (dd - dn, dn))
    ai = ((fn * ad, (fd - fn) * ad), ((ad - an) * fd, an * fd))
    denominator = gd * 2 * ld * dd * dd * cd * (ad * fd) ** 2 * kd
    return FactorTables(
        prior=(gd - gn, gn),
        noise=(ld - ln, ln),
        doc=doc,
        comp_doc=(cd - cn, cn),
        ai=ai,
        comp_ai=(kd - kn, kn),
        denominator=denominator,
        extra_denominator=dd * dd,
    )


def scaled_weight(t: FactorTables, o: Outcome) -> int:
    """Integer numerator of P(o) over ``t.denominator`` (times extra_denominator with x_e)."""
    if o.x[o.w] != o.z:
        return 0
    other = o.x[1 - o.w]
    weight = t.prior[o.z] * t.noise[other]
    if weight == 0:
        return 0
    for j in (L, R):
        weight *= t.doc[o.x[j]][o.x_doc[j]] * t.ai[o.x[j]][o.x_ai[j]]
    if weight == 0:
        return 0
    weight *= t.comp_doc[o.w_doc == o.w] * t.comp_ai[o.w_ai == o.w]
    if o.x_e is not None:
        for j in (L, R):
            weight *= t.doc[o.x[j]][o.x_e[j]]
    return weight


def joint_probability(p: ModelParams, o: Outcome, *, strict: bool = True) -> Fraction:
    """Exact probability of a full outcome; strict=True rejects invalid params."""
    if strict:
        require_valid(p)
    t = factor_tables(p)
    den = t.denominator * (t.extra_denominator if o.x_e is not None else 1)
    return Fraction(scaled_weight(t, o), den)


def canonical_params(**overrides) -> ModelParams:
    """The reference point used across examples: gamma=3/10, lambda=1/5, pi_doc=1/2, ..."""
    base = dict(
        gamma=Fraction(3, 10), lam=Fraction(1, 5), pi_doc=Fraction(1, 2), p_doc=Fraction(3, 4),
        pi_ai=Fraction(3, 5), p_ai=Fraction(4, 5),
    )
    base.update(overrides)
    return ModelParams(**base)


__all__ = [
    "L", "R", "DIM_NAMES", "ModelParams", "Outcome", "Check", "ValidationReport",
    "validate_params", "require_valid", "joint_probability", "feasible_comprehension_floor",
    "phi_ai_floor", "phi_ai_terms", "params_from_mapping", "load_params", "factor_tables",
    "scaled_weight", "canonical_params", "ZERO",
]
