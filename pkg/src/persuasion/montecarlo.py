"""Sampling cross-check of exact probabilities.

Each scenario is a target event and an optional conditioning event written once
as vectorized predicates over signal columns. The same predicate is evaluated
on the enumerated atoms (exact, integer weights) and on simulated draws, so the
Monte Carlo side never touches a closed form.

Every scenario draws from its own PCG64 stream derived from the base seed and
the scenario name, so results do not depend on scenario order or worker count.
"""
from __future__ import annotations

import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .diagnosis import final_interpretable, final_uninterpretable, initial_diagnosis
from .errors import NullEvent, Unrealizable
from .model import L, ModelParams, require_valid
from .oracle import BITS, oracle_for

DEFAULT_SEED = 1234567
DEFAULT_SAMPLES = 10**6
CHUNK = 250_000
TOLERANCE_SIGMAS = 4

Predicate = Callable[["Columns"], np.ndarray]


class Columns:
    """Signal arrays plus derived decisions; attribute names mirror Outcome fields."""

    def __init__(self, raw: Dict[str, np.ndarray], tables: "RuleTables"):
        for key, value in raw.items():
            setattr(self, key, value)
        self.d = _pick(self.xd_l, self.xd_r, self.w_doc)
        self.a = _pick(self.xa_l, self.xa_r, self.w_ai)
        self.xd_crit = self.d
        self.xd_other = _pick(self.xd_r, self.xd_l, self.w_doc)
        self.xa_at_doc = _pick(self.xa_l, self.xa_r, self.w_doc)
        self.xa_other = _pick(self.xa_r, self.xa_l, self.w_doc)
        self.same_w = self.w_ai == self.w_doc
        self.noise = _pick(self.x_r, self.x_l, self.w)
        key_d = self.xd_l + 2 * self.xd_r + 4 * self.w_doc
        self.f_int = tables.interpretable[key_d + 8 * self.xa_l + 16 * self.xa_r + 32 * self.w_ai]
        self.f_unint = tables.uninterpretable[key_d + 8 * self.a]
        if getattr(self, "xe_l", None) is not None:
            self.xe_crit = _pick(self.xe_l, self.xe_r, self.w_doc)


def _pick(left: np.ndarray, right: np.ndarray, idx: np.ndarray) -> np.ndarray:
    return np.where(idx == L, left, right)


@dataclass(frozen=True)
class RuleTables:
    interpretable: np.ndarray
    uninterpretable: np.ndarray


def rule_tables(p: ModelParams) -> RuleTables:
    """Final diagnoses indexed by packed signal codes; unrealizable cells fall back to D."""
    interp = np.zeros(64, dtype=np.int8)
    unint = np.zeros(16, dtype=np.int8)
    for xd in BITS:
        for wd in (0, 1):
            d = initial_diagnosis(p, xd, wd)
            base = xd[0] + 2 * xd[1] + 4 * wd
            for a in (0, 1):
                try:
                    unint[base + 8 * a] = final_uninterpretable(p, xd, wd, d, a).f
                except Unrealizable:
                    unint[base + 8 * a] = d
            for xa in BITS:
                for wa in (0, 1):
                    code = base + 8 * xa[0] + 16 * xa[1] + 32 * wa
                    try:
                        interp[code] = final_interpretable(p, xd, wd, xa, wa).f
                    except Unrealizable:
                        interp[code] = d
    return RuleTables(interp, unint)


@dataclass(frozen=True)
class Scenario:
    name: str
    target: Predicate
    given: Optional[Predicate] = None
    extra: bool = False
    note: str = ""


def _all(c: Columns) -> np.ndarray:
    return np.ones_like(c.z, dtype=bool)


SCENARIOS: List[Scenario] = [
    Scenario("prior", lambda c: c.z == 1, note="P(Z=1)"),
    Scenario("critical_left", lambda c: c.w == L, note="P(W=L)"),
    Scenario("noise_rate", lambda c: c.noise == 1, note="P(X_-W = 1)"),
    Scenario("doctor_comprehension", lambda c: c.w_doc == c.w, note="P(W^Doc = W)"),
    Scenario("ai_comprehension", lambda c: c.w_ai == c.w, note="P(W^AI = W)"),
    Scenario("doctor_positive", lambda c: c.d == 1, note="P(D=1)"),
    Scenario("ai_positive", lambda c: c.a == 1, note="P(A=1)"),
    Scenario("agreement", lambda c: c.d == c.a, note="P(D=A)"),
    Scenario("posterior_d1", lambda c: c.z == 1, lambda c: c.d == 1, note="P(Z=1 | D=1)"),
    Scenario("posterior_d0", lambda c: c.z == 1, lambda c: c.d == 0, note="P(Z=1 | D=0)"),
    Scenario("posterior_a1", lambda c: c.z == 1, lambda c: c.a == 1, note="P(Z=1 | A=1)"),
    Scenario("posterior_a0", lambda c: c.z == 1, lambda c: c.a == 0, note="P(Z=1 | A=0)"),
    Scenario("posterior_unint_01", lambda c: c.z == 1, lambda c: (c.d == 0) & (c.a == 1),
             note="P(Z=1 | D=0, A=1)"),
    Scenario("posterior_unint_10", lambda c: c.z == 1, lambda c: (c.d == 1) & (c.a == 0),
             note="P(Z=1 | D=1, A=0)"),
    Scenario("posterior_off_critical_01", lambda c: c.z == 1,
             lambda c: (c.xd_crit == 0) & (c.xd_other == 1) & (c.a == 1),
             note="P(Z=1 | X^Doc=(0,1) in doctor labels, A=1)"),
    Scenario("posterior_comprehension_01", lambda c: c.z == 1,
             lambda c: (c.xd_crit == 0) & (c.xd_other == 1) & (c.xa_at_doc == 0) & (c.xa_other == 1) & ~c.same_w,
             note="P(Z=1 | X^Doc=(0,1), X^AI=(0,1), W^AI != W^Doc)"),
    Scenario("posterior_comprehension_10", lambda c: c.z == 1,
             lambda c: (c.xd_crit == 1) & (c.xd_other == 0) & (c.xa_l == 0) & (c.xa_r == 0) & ~c.same_w,
             note="P(Z=1 | X^Doc=(1,0), X^AI=(0,0), W^AI != W^Doc)"),
    Scenario("attention_weight_01", lambda c: c.xa_at_doc == 1, lambda c: (c.d == 0) & (c.a == 1),
             note="P(Atten | D=0, A=1)"),
    Scenario("attention_weight_10", lambda c: c.same_w, lambda c: (c.d == 1) & (c.a == 0),
             note="P(Atten | D=1, A=0)"),
    Scenario("doctor_accuracy", lambda c: c.d == c.z, note="P(D=Z)"),
    Scenario("ai_accuracy", lambda c: c.a == c.z, note="P(A=Z)"),
    Scenario("accuracy_interpretable", lambda c: c.f_int == c.z, note="P(F=Z), interpretable AI"),
    Scenario("accuracy_uninterpretable", lambda c: c.f_unint == c.z, note="P(F=Z), uninterpretable AI"),
    Scenario("switch_interpretable", lambda c: c.f_int != c.d, note="P(F != D), interpretable AI"),
    Scenario("switch_uninterpretable", lambda c: c.f_unint != c.d, note="P(F != D), uninterpretable AI"),
    Scenario("unint_disagreement_accuracy", lambda c: c.f_unint == c.z, lambda c: (c.d == 0) & (c.a == 1),
             note="P(F=Z | D=0, A=1), uninterpretable AI"),
    Scenario("combined_both", lambda c: (np.maximum(c.xd_l, c.xa_l) == 1) & (np.maximum(c.xd_r, c.xa_r) == 1),
             note="P(combined observations show (1,1))"),
    Scenario("combined_both_posterior", lambda c: c.z == 1,
             lambda c: (np.maximum(c.xd_l, c.xa_l) == 1) & (np.maximum(c.xd_r, c.xa_r) == 1),
             note="P(Z=1 | combined observations show (1,1))"),
    Scenario("extra_signal_positive", lambda c: c.xe_crit == 1, lambda c: c.d == 0, extra=True,
             note="P(X^E at W^Doc = 1 | D=0)"),
]
SCENARIO_INDEX: Dict[str, Scenario] = {s.name: s for s in SCENARIOS}


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIO_INDEX[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; choose from {sorted(SCENARIO_INDEX)}") from None


# ---------------------------------------------------------------- exact side


def _atom_columns(p: ModelParams, extra: bool, tables: RuleTables):
    o = oracle_for(p, with_extra=extra)
    atoms = o.atoms

    def col(fn):
        return np.array([fn(a) for a in atoms], dtype=np.int8)

    raw = {
        "z": col(lambda a: a.z), "w": col(lambda a: a.w),
        "x_l": col(lambda a: a.x[0]), "x_r": col(lambda a: a.x[1]),
        "xd_l": col(lambda a: a.x_doc[0]), "xd_r": col(lambda a: a.x_doc[1]), "w_doc": col(lambda a: a.w_doc),
        "xa_l": col(lambda a: a.x_ai[0]), "xa_r": col(lambda a: a.x_ai[1]), "w_ai": col(lambda a: a.w_ai),
    }
    if extra:
        raw["xe_l"] = col(lambda a: a.x_e[0])
        raw["xe_r"] = col(lambda a: a.x_e[1])
    return Columns(raw, tables), o.weights


def exact_value(p: ModelParams, scenario: Scenario, tables: Optional[RuleTables] = None) -> Fraction:
    cols, weights = _atom_columns(p, scenario.extra, tables or rule_tables(p))
    given = (scenario.given or _all)(cols)
    hit = given & scenario.target(cols)
    den = sum(w for w, g in zip(weights, given) if g)
    if den == 0:
        raise NullEvent(f"scenario {scenario.name}: conditioning event has probability zero")
    return Fraction(sum(w for w, h in zip(weights, hit) if h), den)


# ---------------------------------------------------------------- sampling side


def scenario_seed(seed: int, name: str) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=(zlib.crc32(name.encode("utf-8")),))


def draw(p: ModelParams, n: int, rng: np.random.Generator, extra: bool = False) -> Dict[str, np.ndarray]:
    """n independent outcomes from the generative model."""
    g, lam = float(p.gamma), float(p.lam)
    pi_d, pi_a, q_d, q_a = float(p.pi_doc), float(p.pi_ai), float(p.p_doc), float(p.p_ai)
    false_pos = float(1 - p.phi_ai)
    i8 = np.int8
    z = (rng.random(n) < g).astype(i8)
    w = rng.integers(0, 2, n, dtype=i8)
    other = (rng.random(n) < lam).astype(i8)
    x_l = np.where(w == L, z, other)
    x_r = np.where(w == L, other, z)
    out = {"z": z, "w": w, "x_l": x_l, "x_r": x_r}
    out["xd_l"] = (x_l & (rng.random(n) < pi_d)).astype(i8)
    out["xd_r"] = (x_r & (rng.random(n) < pi_d)).astype(i8)
    out["w_doc"] = np.where(rng.random(n) < q_d, w, 1 - w).astype(i8)
    for side, x in (("l", x_l), ("r", x_r)):
        u = rng.random(n)
        out[f"xa_{side}"] = np.where(x == 1, u < pi_a, u < false_pos).astype(i8)
    out["w_ai"] = np.where(rng.random(n) < q_a, w, 1 - w).astype(i8)
    if extra:
        out["xe_l"] = (x_l & (rng.random(n) < pi_d)).astype(i8)
        out["xe_r"] = (x_r & (rng.random(n) < pi_d)).astype(i8)
    return out


@dataclass(frozen=True)
class McEstimate:
    scenario: str
    estimate: Optional[float]
    stderr: Optional[float]
    n: int
    n_given: int
    exact: Fraction

    @property
    def flagged(self) -> bool:
        """No conditioning draws, so no estimate."""
        return self.estimate is None

    @property
    def z_score(self) -> Optional[float]:
        if self.flagged:
            return None
        gap = abs(self.estimate - float(self.exact))
        if self.stderr == 0:
            return 0.0 if gap < 1e-12 else math.inf
        return gap / self.stderr

    def within(self, sigmas: float = TOLERANCE_SIGMAS) -> bool:
        z = self.z_score
        return z is not None and z <= sigmas

    def as_row(self) -> dict:
        return {
            "scenario": self.scenario, "estimate": self.estimate, "stderr": self.stderr, "n": self.n,
            "n_given": self.n_given, "exact": self.exact, "within_4se": self.within(),
        }


def run_scenario(p: ModelParams, name: str, n: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                 tables: Optional[RuleTables] = None) -> McEstimate:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    require_valid(p)
    scenario = get_scenario(name)
    tables = tables or rule_tables(p)
    try:
        exact = exact_value(p, scenario, tables)
    except NullEvent:
        raise NullEvent(f"scenario {name}: conditioning event has probability zero") from None
    rng = np.random.Generator(np.random.PCG64(scenario_seed(seed, name)))
    hits = given_total = 0
    remaining = n
    while remaining:
        k = min(CHUNK, remaining)
        cols = Columns(draw(p, k, rng, scenario.extra), tables)
        given = (scenario.given or _all)(cols)
        given_total += int(given.sum())
        hits += int((given & scenario.target(cols)).sum())
        remaining -= k
    if given_total == 0:
        return McEstimate(name, None, None, n, 0, exact)
    est = hits / given_total
    return McEstimate(name, est, math.sqrt(est * (1 - est) / given_total), n, given_total, exact)


def _run_one(args):
    return run_scenario(*args)


def run_all(p: ModelParams, n: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
            names: Optional[Sequence[str]] = None, jobs: int = 1) -> List[McEstimate]:
    names = list(names) if names is not None else [s.name for s in SCENARIOS]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, [(p, name, n, seed) for name in names]))
    tables = rule_tables(p)
    return [run_scenario(p, name, n, seed, tables) for name in names]


def coverage(estimates: Sequence[McEstimate], sigmas: float = TOLERANCE_SIGMAS) -> float:
    usable = [e for e in estimates if not e.flagged]
    if not usable:
        return 0.0
    return sum(e.within(sigmas) for e in usable) / len(usable)


__all__ = [
    "Scenario", "SCENARIOS", "get_scenario", "McEstimate", "run_scenario", "run_all", "exact_value",
    "draw", "rule_tables", "scenario_seed", "coverage", "DEFAULT_SEED", "DEFAULT_SAMPLES",
]
