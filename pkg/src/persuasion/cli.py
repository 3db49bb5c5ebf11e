"""Command-line front end.

    persuasion thresholds --grid pi_doc:0.1:0.9:0.1 --out results/
    persuasion verify
    persuasion career --params pop.json
    persuasion freeride
    persuasion posterior --x-doc 01 --w-doc L --a 1
    persuasion attribution --x-doc 01 --w-doc L --d 0 --a 1
    persuasion montecarlo --n 1000000 --seed 1234567

Exit codes: 0 success, 1 invariant failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from . import attribution, career, diagnosis, freeride, montecarlo, thresholds, verify
from .errors import InfeasibleConstruction, InvalidParams, InvariantViolation, PersuasionError
from .model import ModelParams, canonical_params, load_params, validate_params
from .oracle import BITS, INTERPRETABLE, UNINTERPRETABLE, interpretable_info, oracle_for, uninterpretable_info
from .rational import format_decimal, format_fraction, is_inf, to_fraction

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT = 0, 1, 2
U64 = 2**64

# grid variable names accepted on the command line -> ModelParams field
PARAM_VARS = {"gamma": "gamma", "lambda": "lam", "lam": "lam", "pi_doc": "pi_doc", "p_doc": "p_doc",
              "pi_ai": "pi_ai", "p_ai": "p_ai", "phi_ai": "phi_ai", "pi_bar": "pi_bar"}


@dataclass(frozen=True)
class GridSpec:
    var: str
    start: Fraction
    stop: Fraction
    step: Fraction

    def values(self) -> List[Fraction]:
        count = int((self.stop - self.start) / self.step) + 1
        return [self.start + k * self.step for k in range(max(count, 0))]


def parse_grid(text: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) != 4:
        raise InvalidParams(f"grid must look like var:start:stop:step, got {text!r}")
    var, *nums = parts
    try:
        start, stop, step = (to_fraction(v) for v in nums)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParams(f"bad grid number in {text!r}: {exc}") from exc
    if step <= 0:
        raise InvalidParams(f"grid step must be positive, got {step}")
    if stop < start:
        raise InvalidParams(f"grid stop {stop} is below start {start}")
    return GridSpec(var, start, stop, step)


@dataclass(frozen=True)
class SweepConfig:
    params_path: Optional[Path] = None
    grid: Optional[GridSpec] = None
    out_dir: Path = Path(".")
    seed: int = montecarlo.DEFAULT_SEED
    mc_samples: int = montecarlo.DEFAULT_SAMPLES
    jobs: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < U64:
            raise InvalidParams(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.mc_samples < 1:
            raise InvalidParams(f"sample count must be positive, got {self.mc_samples}")
        if self.jobs < 1:
            raise InvalidParams(f"jobs must be positive, got {self.jobs}")

    def load(self, default: Optional[ModelParams] = None) -> Tuple[ModelParams, dict]:
        if self.params_path is None:
            return (default or canonical_params()), {}
        return load_params(self.params_path)


# ---------------------------------------------------------------- output helpers


def _cell(value) -> Tuple[str, str]:
    """(12-place decimal, exact fraction) for one value."""
    if value is None:
        return "", ""
    if is_inf(value):
        return "inf", "inf"
    if isinstance(value, bool):
        return str(int(value)), str(int(value))
    value = Fraction(value)
    return format_decimal(value), format_fraction(value)


def write_csv(path: Path, exact_cols: Sequence[str], rows: Iterable[dict], plain_cols: Sequence[str] = ()) -> Path:
    """CSV with a decimal and an ``_exact`` column per rational; plain columns are written as is."""
    path.parent.mkdir(parents=True, exist_ok=True)
    header = list(plain_cols)
    for name in exact_cols:
        header += [name, f"{name}_exact"]
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            line = [row.get(c, "") for c in plain_cols]
            for name in exact_cols:
                line += list(_cell(row.get(name)))
            writer.writerow(line)
    return path


def _json_default(value):
    if isinstance(value, Fraction):
        return format_fraction(value)
    if is_inf(value):
        return "inf"
    if isinstance(value, (tuple, set)):
        return list(value)
    return str(value)


def write_json(path: Path, data) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, default=_json_default) + "\n", encoding="utf-8")
    return path


def _say(data) -> None:
    print(json.dumps(data, indent=2, default=_json_default))


def _vary(p: ModelParams, var: str, value: Fraction) -> ModelParams:
    if var not in PARAM_VARS:
        raise InvalidParams(f"cannot sweep {var!r}; choose from {sorted(PARAM_VARS)}")
    return p.with_(**{PARAM_VARS[var]: value})


# ---------------------------------------------------------------- thresholds


def _threshold_row(args) -> Tuple[Optional[dict], Optional[str]]:
    p, var, value = args
    try:
        q = _vary(p, var, value)
        # thresholds do not depend on p_doc; judge feasibility at the most skilled doctor
        if var != "p_doc":
            q = q.with_(p_doc=Fraction(1))
    except InvalidParams as exc:
        return None, str(exc)
    report = validate_params(q)
    if not report.ok:
        return None, report.summary()
    ts = thresholds.threshold_set(q)
    return {var: value, **dict(ts.items())}, None


def cmd_thresholds(config: SweepConfig) -> int:
    p, _ = config.load()
    grid = config.grid or GridSpec("pi_doc", Fraction(1, 10), Fraction(9, 10), Fraction(1, 10))
    tasks = [(p, grid.var, v) for v in grid.values()]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_threshold_row, tasks))
    else:
        results = [_threshold_row(t) for t in tasks]
    rows = [r for r, _ in results if r is not None]
    invalid = [{grid.var: format_fraction(v), "reason": why} for (_, _, v), (r, why) in zip(tasks, results) if r is None]
    if invalid:
        write_json(config.out_dir / "thresholds_invalid.json", invalid)
    if not rows:
        print(f"error: no valid grid points ({len(invalid)} invalid)", file=sys.stderr)
        return EXIT_INPUT
    cols = [grid.var, "p1", "p2", "p3", "p4"]
    if any("p1_prime" in r for r in rows):
        cols += ["p1_prime", "p1_dprime", "p2_prime"]
    path = write_csv(config.out_dir / "thresholds.csv", cols, rows)
    ordered = all(r["p4"] <= r["p3"] <= r["p1"] <= r["p2"] for r in rows)
    _say({"file": str(path), "rows": len(rows), "invalid": len(invalid), "ordered": ordered})
    return EXIT_OK


# ---------------------------------------------------------------- verify


def cmd_verify(config: SweepConfig) -> int:
    if config.grid is not None or config.params_path is not None:
        p, _ = config.load()
        points = [p]
        if config.grid is not None:
            points = [_vary(p, config.grid.var, v) for v in config.grid.values()]
        bad = [q for q in points if not validate_params(q).ok]
        if bad:
            print(f"error: {len(bad)} invalid grid point(s): {validate_params(bad[0]).summary()}", file=sys.stderr)
            return EXIT_INPUT
        halluc = [q for q in points if q.phi_ai < 1]
        points = [q.with_(phi_ai=Fraction(1), pi_bar=None) if q.phi_ai < 1 else q for q in points]
        report = verify.run_suite(points, halluc, include_global=config.grid is None)
    else:
        report = verify.run_suite()
    path = write_json(config.out_dir / "verify_report.json", report)
    summary = {name: f"{r['passed']} passed, {r['failed']} failed" for name, r in report["checks"].items()}
    _say({"ok": report["ok"], "report": str(path), "grid_points": report["grid_points"],
          "hallucination_points": report["hallucination_points"], "elapsed_seconds": report["elapsed_seconds"],
          "checks": summary})
    if not report["ok"]:
        print("counterexample: " + json.dumps(verify.first_failure(report), default=_json_default), file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


# ---------------------------------------------------------------- career


def _population(config: SweepConfig) -> career.PopulationParams:
    if config.params_path is None:
        return career.canonical_population()
    p, extras = config.load()
    if "p_doc_low" not in extras:
        return career.construct_career_params(p.gamma, p.lam, p.pi_doc, p.pi_ai, p_ai=p.p_ai,
                                             tau=extras.get("tau"))
    pp = career.PopulationParams(p.with_(p_doc=extras["p_doc_low"]), extras["p_doc_low"],
                                 extras.get("tau", Fraction(1, 2)), extras.get("p_doc_high", Fraction(1)))
    return career.check_population(pp)


def cmd_career(config: SweepConfig) -> int:
    pp = _population(config)
    acc = career.accuracy_delta(pp)
    if config.grid is not None:
        if config.grid.var != "tau":
            raise InvalidParams(f"career sweeps tau, got {config.grid.var!r}")
        taus = config.grid.values()
    else:
        top = min(Fraction(1), 2 * acc.tau_bar)
        taus = [top * k / 20 for k in range(21)]
    if any(not 0 <= t <= 1 for t in taus):
        raise InvalidParams("tau values must lie in [0, 1]")
    rows = []
    for tau in taus:
        ai = career.population_accuracy(pp, INTERPRETABLE, tau)
        au = career.population_accuracy(pp, UNINTERPRETABLE, tau)
        rows.append({"tau": tau, "accuracy_interpretable": ai, "accuracy_uninterpretable": au,
                     "difference": au - ai, "lower_bound": acc.lower_bound(tau),
                     "below_tau_bar": int(tau < acc.tau_bar)})
    path = write_csv(config.out_dir / "career.csv",
                     ["tau", "accuracy_interpretable", "accuracy_uninterpretable", "difference", "lower_bound"],
                     rows, plain_cols=["below_tau_bar"])
    summary = {"p_doc_low": pp.p_doc_low, "p_ai": pp.base.p_ai, "delta1": acc.delta1, "delta2": acc.delta2,
               "delta": acc.delta, "tau_bar": acc.tau_bar, "file": str(path),
               "difference_above_bound": all(r["difference"] >= r["lower_bound"] for r in rows)}
    write_json(config.out_dir / "career_summary.json", summary)
    _say(summary)
    if not summary["difference_above_bound"]:
        return EXIT_INVARIANT
    return EXIT_OK


# ---------------------------------------------------------------- freeride


def _freeride_params(config: SweepConfig) -> freeride.FreerideParams:
    if config.params_path is None:
        return freeride.canonical_freeride()
    p, extras = config.load()
    fp = freeride.FreerideParams(p, extras.get("cost", Fraction(1, 100)))
    return freeride.check_freeride(fp)


def cmd_freeride(config: SweepConfig) -> int:
    fp = _freeride_params(config)
    report = freeride.freeride_report(fp)
    if config.grid is not None:
        if config.grid.var not in ("c", "cost"):
            raise InvalidParams(f"freeride sweeps the cost c, got {config.grid.var!r}")
        costs = config.grid.values()
    else:
        costs = freeride.cost_probe_grid(fp)
    if any(c <= 0 for c in costs):
        raise InvalidParams("costs must be positive")
    rows = []
    for c in costs:
        table = freeride.draw_table(fp, c)
        ai = freeride.freeride_accuracy(fp, c, INTERPRETABLE)
        au = freeride.freeride_accuracy(fp, c, UNINTERPRETABLE)
        row = {"c": c, "accuracy_interpretable": ai, "accuracy_uninterpretable": au, "gap": au - ai,
               "draws_interpretable": sum(table[INTERPRETABLE]),
               "draws_uninterpretable": sum(table[UNINTERPRETABLE]),
               "in_interval": int(report.c1 < c < report.c2)}
        for regime, tag in ((INTERPRETABLE, "int"), (UNINTERPRETABLE, "unint")):
            for k, drew in zip(freeride.CASES, table[regime]):
                row[f"draw_{tag}_{k}"] = int(drew)
        rows.append(row)
    plain = ["in_interval", "draws_interpretable", "draws_uninterpretable"]
    plain += [f"draw_{t}_{k}" for t in ("int", "unint") for k in freeride.CASES]
    path = write_csv(config.out_dir / "freeride.csv", ["c", "accuracy_interpretable", "accuracy_uninterpretable", "gap"],
                     rows, plain_cols=plain)
    inside = [r for r in rows if r["in_interval"]]
    summary = {
        "deltas": list(report.deltas), "mu": report.mu, "eta": report.eta, "c1": report.c1, "c2": report.c2,
        "branch": report.branch, "pooled_gains": list(report.mixtures),
        "policies_inside_interval": report.regime_policies, "file": str(path),
        "gap_positive_inside_interval": all(r["gap"] > 0 for r in inside),
        "draws_unint_ge_int_every_row": all(r["draws_uninterpretable"] >= r["draws_interpretable"] for r in rows),
    }
    write_json(config.out_dir / "freeride_summary.json", summary)
    _say(summary)
    return EXIT_OK


# ---------------------------------------------------------------- posterior and attribution


def parse_bits(text: str) -> Tuple[int, int]:
    if len(text) != 2 or set(text) - {"0", "1"}:
        raise InvalidParams(f"signal must be two bits like 01, got {text!r}")
    return int(text[0]), int(text[1])


def parse_dim(text: str) -> int:
    table = {"L": 0, "R": 1, "0": 0, "1": 1}
    try:
        return table[text.upper()]
    except KeyError:
        raise InvalidParams(f"dimension must be L or R, got {text!r}") from None


def _fmt_bits(b) -> str:
    return f"{b[0]}{b[1]}"


def cmd_posterior(config: SweepConfig, x_doc=None, w_doc=None, x_ai=None, w_ai=None, a=None) -> int:
    p, _ = config.load()
    if x_doc is not None:
        if w_doc is None:
            raise InvalidParams("--w-doc is required with --x-doc")
        if x_ai is not None:
            if w_ai is None:
                raise InvalidParams("--w-ai is required with --x-ai")
            rec = diagnosis.final_interpretable(p, x_doc, w_doc, x_ai, w_ai)
            info = interpretable_info(x_doc, w_doc, x_ai, w_ai)
        elif a is not None:
            d = diagnosis.initial_diagnosis(p, x_doc, w_doc)
            rec = diagnosis.final_uninterpretable(p, x_doc, w_doc, d, a)
            info = uninterpretable_info(x_doc, w_doc, d, a)
        else:
            raise InvalidParams("give --x-ai/--w-ai (interpretable) or --a (uninterpretable)")
        post = oracle_for(p).posterior(info)
        expected = Fraction(1) if is_inf(rec.ratio) else rec.ratio / (1 + rec.ratio)
        _say({"d": rec.d, "a": rec.a, "f": rec.f, "likelihood_ratio": rec.ratio, "posterior": post,
              "source": rec.source, "matches_oracle": post == expected})
        return EXIT_OK if post == expected else EXIT_INVARIANT
    rows = []
    o = oracle_for(p)
    for (xd, wd, xa, wa), (m0, m1) in sorted(o.grouped(lambda t: (t.x_doc, t.w_doc, t.x_ai, t.w_ai)).items()):
        rec = diagnosis.final_interpretable(p, xd, wd, xa, wa)
        rows.append({"regime": INTERPRETABLE, "x_doc": _fmt_bits(xd), "w_doc": "LR"[wd], "x_ai": _fmt_bits(xa),
                     "w_ai": "LR"[wa], "a": rec.a, "d": rec.d, "f": rec.f, "probability": m0 + m1,
                     "posterior": Fraction(m1, m0 + m1)})
    for (xd, wd, av), (m0, m1) in sorted(o.grouped(lambda t: (t.x_doc, t.w_doc, t.x_ai[t.w_ai])).items()):
        d = diagnosis.initial_diagnosis(p, xd, wd)
        rec = diagnosis.final_uninterpretable(p, xd, wd, d, av)
        rows.append({"regime": UNINTERPRETABLE, "x_doc": _fmt_bits(xd), "w_doc": "LR"[wd], "x_ai": "", "w_ai": "",
                     "a": av, "d": d, "f": rec.f, "probability": m0 + m1, "posterior": Fraction(m1, m0 + m1)})
    for r in rows:
        r["probability"] = Fraction(r["probability"], o.denominator)
    path = write_csv(config.out_dir / "posterior.csv", ["probability", "posterior"], rows,
                     plain_cols=["regime", "x_doc", "w_doc", "x_ai", "w_ai", "d", "a", "f"])
    _say({"file": str(path), "rows": len(rows)})
    return EXIT_OK


def _attribution_row(p, info) -> dict:
    rec = attribution.decompose(p, info)
    return {"w_atten": rec.w_atten, "w_comp": rec.w_comp, "post_atten": rec.post_atten,
            "post_comp": rec.post_comp, "post_total": rec.post_total, "identity": int(rec.identity_holds())}


def cmd_attribution(config: SweepConfig, x_doc=None, w_doc=None, d=None, a=None) -> int:
    p, _ = config.load()
    if x_doc is not None:
        if w_doc is None or a is None:
            raise InvalidParams("--w-doc and --a are required with --x-doc")
        d = diagnosis.initial_diagnosis(p, x_doc, w_doc) if d is None else d
        row = _attribution_row(p, uninterpretable_info(x_doc, w_doc, d, a))
        _say(row)
        return EXIT_OK if row["identity"] else EXIT_INVARIANT
    rows = []
    o = oracle_for(p)
    for xd in BITS:
        for wd in (0, 1):
            dd = xd[wd]
            info = uninterpretable_info(xd, wd, dd, 1 - dd)
            if not sum(o.info_masses(info)):
                continue
            rows.append({"x_doc": _fmt_bits(xd), "w_doc": "LR"[wd], "d": dd, "a": 1 - dd,
                         **_attribution_row(p, info)})
    path = write_csv(config.out_dir / "attribution.csv", ["w_atten", "w_comp", "post_atten", "post_comp", "post_total"],
                     rows, plain_cols=["x_doc", "w_doc", "d", "a", "identity"])
    ok = all(r["identity"] for r in rows)
    _say({"file": str(path), "rows": len(rows), "identity_holds": ok})
    return EXIT_OK if ok else EXIT_INVARIANT


# ---------------------------------------------------------------- Monte Carlo


def cmd_montecarlo(config: SweepConfig, scenario: Optional[str] = None) -> int:
    p, _ = config.load()
    names = [scenario] if scenario else None
    estimates = montecarlo.run_all(p, config.mc_samples, config.seed, names=names, jobs=config.jobs)
    rows = []
    for e in estimates:
        rows.append({"scenario": e.scenario, "estimate": "" if e.flagged else repr(e.estimate),
                     "stderr": "" if e.flagged else repr(e.stderr), "n": e.n, "n_given": e.n_given,
                     "within_4se": int(e.within()), "flagged": int(e.flagged), "exact": e.exact})
    path = write_csv(config.out_dir / "montecarlo.csv", ["exact"], rows,
                     plain_cols=["scenario", "estimate", "stderr", "n", "n_given", "within_4se", "flagged"])
    cover = montecarlo.coverage(estimates)
    _say({"file": str(path), "scenarios": len(estimates), "seed": config.seed, "n": config.mc_samples,
          "coverage_4se": cover, "flagged": [e.scenario for e in estimates if e.flagged]})
    return EXIT_OK if cover >= 0.99 else EXIT_INVARIANT


# ---------------------------------------------------------------- argument parsing


def _u64(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < U64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {text}")
    return value


def _arg(fn):
    def wrapped(text):
        try:
            return fn(text)
        except InvalidParams as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    wrapped.__name__ = fn.__name__
    return wrapped


def _common(defaults: bool) -> argparse.ArgumentParser:
    sup = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--params", type=Path, default=sup(None), help="JSON parameter file")
    parser.add_argument("--out", type=Path, default=sup(Path(".")), help="output directory")
    parser.add_argument("--seed", type=_u64, default=sup(montecarlo.DEFAULT_SEED), help="64-bit seed")
    parser.add_argument("--grid", type=_arg(parse_grid), default=sup(None), help="var:start:stop:step")
    parser.add_argument("--jobs", type=int, default=sup(1), help="worker processes")
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="persuasion", description=__doc__.splitlines()[0],
                                     parents=[_common(True)])
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(False)
    sub.add_parser("thresholds", parents=[common], help="threshold curves as CSV")
    sub.add_parser("verify", parents=[common], help="run every invariant over a grid")
    sub.add_parser("career", parents=[common], help="career-concerns accuracy over a tau grid")
    sub.add_parser("freeride", parents=[common], help="costly extra signal: draw tables and accuracy")
    post = sub.add_parser("posterior", parents=[common], help="final diagnosis for an information set")
    post.add_argument("--x-doc", type=_arg(parse_bits))
    post.add_argument("--w-doc", type=_arg(parse_dim))
    post.add_argument("--x-ai", type=_arg(parse_bits))
    post.add_argument("--w-ai", type=_arg(parse_dim))
    post.add_argument("--a", type=int, choices=(0, 1))
    att = sub.add_parser("attribution", parents=[common], help="attention/comprehension decomposition")
    att.add_argument("--x-doc", type=_arg(parse_bits))
    att.add_argument("--w-doc", type=_arg(parse_dim))
    att.add_argument("--d", type=int, choices=(0, 1))
    att.add_argument("--a", type=int, choices=(0, 1))
    mc = sub.add_parser("montecarlo", parents=[common], help="sampling check of exact probabilities")
    mc.add_argument("--scenario", choices=[s.name for s in montecarlo.SCENARIOS])
    mc.add_argument("--n", type=int, default=montecarlo.DEFAULT_SAMPLES, help="draws per scenario")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = SweepConfig(params_path=args.params, grid=args.grid, out_dir=args.out, seed=args.seed,
                             mc_samples=getattr(args, "n", montecarlo.DEFAULT_SAMPLES), jobs=args.jobs)
        if args.command == "thresholds":
            return cmd_thresholds(config)
        if args.command == "verify":
            return cmd_verify(config)
        if args.command == "career":
            return cmd_career(config)
        if args.command == "freeride":
            return cmd_freeride(config)
        if args.command == "posterior":
            return cmd_posterior(config, args.x_doc, args.w_doc, args.x_ai, args.w_ai, args.a)
        if args.command == "attribution":
            return cmd_attribution(config, args.x_doc, args.w_doc, args.d, args.a)
        return cmd_montecarlo(config, args.scenario)
    except InvariantViolation as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        if exc.counterexample is not None:
            print("counterexample: " + json.dumps(exc.counterexample, default=_json_default), file=sys.stderr)
        return EXIT_INVARIANT
    except (InvalidParams, InfeasibleConstruction) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PersuasionError as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
