"""Every invariant of the package, run over a parameter grid.

Each check takes a parameter point and returns a list of counterexample dicts
(empty on success). ``run_suite`` collects them into a JSON-ready report.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from . import attribution, career, diagnosis, freeride, thresholds
from .errors import NullEvent, PersuasionError
from .model import ModelParams, feasible_comprehension_floor, phi_ai_floor, validate_params
from .oracle import (BITS, INTERPRETABLE, UNINTERPRETABLE, exact_threshold_in_p_doc, interpretable_info,
                     oracle_for, uninterpretable_info)
from .rational import HALF, INF, ONE, ratio

Failures = List[dict]
STEP = Fraction(1, 10**4)


def _fx(value) -> str:
    return str(value) if value is not None else "None"


# ---------------------------------------------------------------- per-point checks


# the oracle classifies where P(Z=1 | I) >= 1/2; for D=1 -> F=0 that is the unpersuaded set
_COMPLEMENT = {"never": "always", "always": "never", "interval": "interval"}


def _expected_kind(name: str, value: Fraction) -> str:
    kind = thresholds.classify(name, value)
    return kind if thresholds.COMPARISON[name] == "le" else _COMPLEMENT[kind]


def check_oracle_thresholds(p: ModelParams) -> Failures:
    out = []
    for name in ("p1", "p2", "p3", "p4"):
        closed = getattr(thresholds, name)(p)
        sol = exact_threshold_in_p_doc(p, name)
        if sol.root != closed:
            out.append({"threshold": name, "closed_form": _fx(closed), "oracle": _fx(sol.root)})
        elif sol.kind != _expected_kind(name, closed):
            out.append({"threshold": name, "kind": sol.kind, "expected": _expected_kind(name, closed)})
    return out


def check_ordering(p: ModelParams) -> Failures:
    ts = thresholds.threshold_set(p)
    if ts.ordered:
        return []
    return [{"p1": _fx(ts.p1), "p2": _fx(ts.p2), "p3": _fx(ts.p3), "p4": _fx(ts.p4)}]


def check_decision_rules(p: ModelParams) -> Failures:
    """Bayes decisions from enumeration equal the critical-bit rule for both agents."""
    o = oracle_for(p)
    out = []
    for (x, w), bayes in o.doctor_decisions.items():
        if bayes != x[w]:
            out.append({"agent": "doctor", "x": x, "w": w, "bayes": bayes})
    for (x, w), bayes in o.ai_decisions.items():
        if bayes != x[w]:
            out.append({"agent": "ai", "x": x, "w": w, "bayes": bayes})
    try:
        for x in BITS:
            for w in (0, 1):
                diagnosis.initial_diagnosis(p, x, w)
                diagnosis.ai_diagnosis(p, x, w)
    except PersuasionError as exc:
        out.append({"error": str(exc)})
    return out


def check_interpretable_displays(p: ModelParams) -> Failures:
    o = oracle_for(p)
    out = []
    for (xd, wd, xa, wa), (m0, m1) in o.grouped(lambda a: (a.x_doc, a.w_doc, a.x_ai, a.w_ai)).items():
        want = ratio(m1, m0)
        got = diagnosis.lr_interpretable(p, xd, wd, xa, wa)
        if got != want:
            out.append({"cell": [xd, wd, xa, wa], "display": _fx(got), "oracle": _fx(want)})
        both = max(xd[0], xa[0]) == 1 and max(xd[1], xa[1]) == 1
        if p.phi_ai == 1 and both and got is not INF:
            out.append({"cell": [xd, wd, xa, wa], "certainty": _fx(got)})
    return out


def check_uninterpretable_displays(p: ModelParams) -> Failures:
    o = oracle_for(p)
    out = []
    groups = o.grouped(lambda a: (a.x_doc, a.w_doc, a.x_ai[a.w_ai]))
    for (xd, wd, a), (m0, m1) in groups.items():
        want = ratio(m1, m0)
        got = diagnosis.lr_uninterpretable(p, xd, wd, a)
        if got != want:
            out.append({"cell": [xd, wd, a], "display": _fx(got), "oracle": _fx(want)})
    return out


def _disagreement_sets(p: ModelParams):
    o = oracle_for(p)
    for xd, wd in itertools.product(BITS, (0, 1)):
        d = xd[wd]
        a = 1 - d
        info = uninterpretable_info(xd, wd, d, a)
        if sum(o.info_masses(info)):
            yield info
        for xa, wa in itertools.product(BITS, (0, 1)):
            if xa[wa] != a:
                continue
            info = interpretable_info(xd, wd, xa, wa)
            if sum(o.info_masses(info)):
                yield info


def check_decomposition(p: ModelParams) -> Failures:
    out = []
    for info in _disagreement_sets(p):
        rec = attribution.decompose(p, info)
        if not rec.identity_holds() or not rec.sandwiched():
            out.append({"info": repr(info), "record": repr(rec)})
            continue
        if not info.interpretable:
            closed = attribution.closed_form_weights(p, info)
            if closed != (rec.w_atten, rec.w_comp):
                out.append({"info": repr(info), "closed_form": [_fx(v) for v in closed],
                            "oracle": [_fx(rec.w_atten), _fx(rec.w_comp)]})
    return out


def check_averaging(p: ModelParams) -> Failures:
    out = []
    t1, t2 = thresholds.p1(p), thresholds.p2(p)
    if p.pi_doc < 1 and not t2 > t1:
        out.append({"p1": _fx(t1), "p2": _fx(t2)})
    edge = p.with_(pi_doc=ONE)
    e1, e2 = thresholds.FORMULAS["p1"](edge), thresholds.FORMULAS["p2"](edge)
    if e1 != e2:
        out.append({"pi_doc": 1, "p1": _fx(e1), "p2": _fx(e2)})
    return out


def _gap(first: str, second: str) -> Callable[[ModelParams], Fraction]:
    f, g = thresholds.FORMULAS[first], thresholds.FORMULAS[second]
    return lambda q: f(q) - g(q)


def check_attribution_slopes(p: ModelParams) -> Failures:
    out = []
    s12 = thresholds.finite_difference(_gap("p2", "p1"), p, "pi_doc", STEP)
    if not s12 < 0:
        out.append({"gap": "p2-p1", "slope": _fx(s12)})
    if thresholds.in_reversal_region(p):
        s34 = thresholds.finite_difference(_gap("p3", "p4"), p, "pi_doc", STEP)
        if not s34 < 0:
            out.append({"gap": "p3-p4", "slope": _fx(s34)})
    return out


def check_hallucination(p: ModelParams) -> Failures:
    """Thresholds with an AI that hallucinates: oracle equality and the averaging effect."""
    out = []
    a, b, c = thresholds.hallucination_thresholds(p)
    for name, closed in (("p1_prime", a), ("p1_dprime", b), ("p2_prime", c)):
        sol = exact_threshold_in_p_doc(p, name)
        if sol.root != closed:
            out.append({"threshold": name, "closed_form": _fx(closed), "oracle": _fx(sol.root)})
    if p.pi_doc < 1 and not c > b:
        out.append({"p1_dprime": _fx(b), "p2_prime": _fx(c)})
    return out


POINT_CHECKS: Dict[str, Callable[[ModelParams], Failures]] = {
    "oracle_thresholds": check_oracle_thresholds,
    "threshold_ordering": check_ordering,
    "decision_rules": check_decision_rules,
    "interpretable_displays": check_interpretable_displays,
    "uninterpretable_displays": check_uninterpretable_displays,
    "decomposition": check_decomposition,
    "averaging_effect": check_averaging,
    "attribution_slopes": check_attribution_slopes,
}
HALLUCINATION_CHECKS: Dict[str, Callable[[ModelParams], Failures]] = {
    "decision_rules": check_decision_rules,
    "interpretable_displays": check_interpretable_displays,
    "uninterpretable_displays": check_uninterpretable_displays,
    "decomposition": check_decomposition,
    "hallucination_thresholds": check_hallucination,
}


# ---------------------------------------------------------------- one-off checks


def check_career(pp: Optional[career.PopulationParams] = None) -> Failures:
    pp = pp or career.canonical_population()
    out = []
    cases = career.behavior_diff_cases(pp)
    if not (cases.mimicry and cases.matches_expected):
        out.append({"behavior": "high-type behavior differences do not match the expected cells"})
    acc = career.accuracy_delta(pp)
    if not (acc.delta > 0 and 0 < acc.tau_bar < 1):
        out.append({"delta": _fx(acc.delta), "tau_bar": _fx(acc.tau_bar)})
    for k in range(0, 10):
        tau = acc.tau_bar * k / 10
        diff = (career.population_accuracy(pp, UNINTERPRETABLE, tau)
                - career.population_accuracy(pp, INTERPRETABLE, tau))
        bound = acc.lower_bound(tau)
        if not diff >= bound > 0:
            out.append({"tau": _fx(tau), "difference": _fx(diff), "bound": _fx(bound)})
        if tau == 0 and diff != acc.delta:
            out.append({"tau": 0, "difference": _fx(diff), "delta": _fx(acc.delta)})
    return out


def check_freeride(fp: Optional[freeride.FreerideParams] = None) -> Failures:
    """Claims inside the cost interval; the behaviour outside it is reported separately."""
    fp = fp or freeride.canonical_freeride()
    out = []
    freeride.freeride_deltas(fp)
    c1, c2, _ = freeride.cost_interval(fp)
    for k in range(1, 10):
        c = c1 + (c2 - c1) * k / 10
        ni = freeride.draw_count(fp, INTERPRETABLE, c)
        nu = freeride.draw_count(fp, UNINTERPRETABLE, c)
        ai = freeride.freeride_accuracy(fp, c, INTERPRETABLE)
        au = freeride.freeride_accuracy(fp, c, UNINTERPRETABLE)
        if not (nu > ni and au > ai):
            out.append({"cost": _fx(c), "draws": [ni, nu], "accuracy": [_fx(ai), _fx(au)]})
    top = freeride.critical_costs(fp)[-1] * 2
    base = freeride.baseline_accuracy(fp)
    for regime in (INTERPRETABLE, UNINTERPRETABLE):
        if freeride.freeride_accuracy(fp, top, regime) != base:
            out.append({"cost": _fx(top), "regime": regime, "expected": _fx(base)})
    return out


def freeride_draw_scan(fp: Optional[freeride.FreerideParams] = None) -> Failures:
    """Costs anywhere at which the interpretable regime draws in more cases."""
    fp = fp or freeride.canonical_freeride()
    out = []
    for c in freeride.cost_probe_grid(fp):
        ni = freeride.draw_count(fp, INTERPRETABLE, c)
        nu = freeride.draw_count(fp, UNINTERPRETABLE, c)
        if nu < ni:
            out.append({"cost": _fx(c), "interpretable": ni, "uninterpretable": nu})
    return out


GLOBAL_CHECKS: Dict[str, Callable[[], Failures]] = {
    "career_concerns": check_career,
    "freeride_interval": check_freeride,
}
# reported but not counted toward the exit status
ADVISORY_CHECKS: Dict[str, Callable[[], Failures]] = {
    "freeride_draws_all_costs": freeride_draw_scan,
}


# ---------------------------------------------------------------- grids


def _mid_feasible_p_doc(p: ModelParams) -> Optional[Fraction]:
    lo = max(HALF, feasible_comprehension_floor(p, "doctor"))
    if lo >= 1:
        return None
    return (lo + 1) / 2


def default_grid() -> List[ModelParams]:
    """Valid points spanning prior, noise, attention and AI skill, including points in the reversal region."""
    points = []
    gammas = [Fraction(1, 5), Fraction(3, 10), Fraction(2, 5), Fraction(9, 20)]
    for g in gammas:
        for lam in (g / 2, g * 3 / 4, g):
            for pi_d in (Fraction(1, 10), Fraction(3, 10), HALF, Fraction(7, 10), Fraction(9, 10)):
                for pi_a in (Fraction(3, 10), Fraction(3, 5), Fraction(9, 10)):
                    for q_a in (Fraction(4, 5), Fraction(19, 20)):
                        probe = ModelParams(gamma=g, lam=lam, pi_doc=pi_d, p_doc=ONE, pi_ai=pi_a, p_ai=q_a)
                        p_doc = _mid_feasible_p_doc(probe)
                        if p_doc is None:
                            continue
                        q = probe.with_(p_doc=p_doc)
                        if validate_params(q).ok:
                            points.append(q)
    # every third point keeps the suite well under a minute while covering each axis
    return points[::3]


def hallucination_grid(points: Sequence[ModelParams]) -> List[ModelParams]:
    """phi_ai halfway between its floor and 1, at points where that floor is below 1."""
    out = []
    for p in points[::4]:
        floor = phi_ai_floor(p.with_(phi_ai=HALF))
        if floor >= 1 or p.pi_ai == 0:
            continue
        q = p.with_(phi_ai=(max(floor, 0) + 1) / 2)
        if validate_params(q).ok:
            out.append(q)
    return out


# ---------------------------------------------------------------- driver


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    counterexamples: List[dict] = field(default_factory=list)

    def record(self, point: Optional[ModelParams], failures: Failures, keep: int = 5):
        if failures:
            self.failed += 1
            if len(self.counterexamples) < keep:
                self.counterexamples.append({"params": point.describe() if point else None, "details": failures})
        else:
            self.passed += 1

    def as_dict(self) -> dict:
        return {"passed": self.passed, "failed": self.failed, "counterexamples": self.counterexamples}


def _safe(check, *args) -> Failures:
    try:
        return check(*args)
    except (PersuasionError, NullEvent, ZeroDivisionError) as exc:
        return [{"error": f"{type(exc).__name__}: {exc}"}]


def run_suite(points: Optional[Iterable[ModelParams]] = None,
              halluc_points: Optional[Iterable[ModelParams]] = None,
              include_global: bool = True) -> dict:
    start = time.perf_counter()
    points = list(points) if points is not None else default_grid()
    halluc_points = list(halluc_points) if halluc_points is not None else hallucination_grid(points)
    results: Dict[str, CheckResult] = {}

    def result(key):
        return results.setdefault(key, CheckResult(key))

    for p in points:
        for name, check in POINT_CHECKS.items():
            result(name).record(p, _safe(check, p))
    for p in halluc_points:
        for name, check in HALLUCINATION_CHECKS.items():
            result(f"hallucination/{name}").record(p, _safe(check, p))
    advisory = {}
    if include_global:
        for name, check in GLOBAL_CHECKS.items():
            result(name).record(None, _safe(check))
        for name, check in ADVISORY_CHECKS.items():
            found = _safe(check)
            advisory[name] = {"holds": not found, "counterexamples": found}
    ok = all(r.failed == 0 for r in results.values())
    return {
        "ok": ok,
        "grid_points": len(points),
        "hallucination_points": len(halluc_points),
        "elapsed_seconds": round(time.perf_counter() - start, 3),
        "checks": {k: r.as_dict() for k, r in results.items()},
        "advisory": advisory,
    }


def first_failure(report: dict) -> Optional[dict]:
    for name, r in report["checks"].items():
        if r["failed"]:
            return {"check": name, **(r["counterexamples"][0] if r["counterexamples"] else {})}
    return None


__all__ = [
    "run_suite", "default_grid", "hallucination_grid", "POINT_CHECKS", "HALLUCINATION_CHECKS",
    "GLOBAL_CHECKS", "ADVISORY_CHECKS", "first_failure", "check_oracle_thresholds", "check_ordering",
    "check_decision_rules", "check_interpretable_displays", "check_uninterpretable_displays",
    "check_decomposition", "check_averaging", "check_attribution_slopes", "check_hallucination",
    "check_career", "check_freeride", "freeride_draw_scan",
]
