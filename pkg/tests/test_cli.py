import csv
import json
from fractions import Fraction as F

import pytest

from persuasion import thresholds
from persuasion.cli import main, parse_grid
from persuasion.errors import InvalidParams

CANON = {"gamma": "3/10", "lambda": "1/5", "pi_doc": "1/2", "p_doc": "3/4", "pi_ai": "3/5", "p_ai": "4/5"}


def _rows(path):
    with path.open(encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def _params(tmp_path, **over):
    path = tmp_path / "params.json"
    path.write_text(json.dumps({**CANON, **over}), encoding="utf-8")
    return path


def test_thresholds_default_sweep(tmp_path):
    assert main(["thresholds", "--out", str(tmp_path)]) == 0
    path = tmp_path / "thresholds.csv"
    raw = path.read_bytes()
    assert b"\r\n" not in raw
    rows = _rows(path)
    assert len(rows) == 9
    mid = next(r for r in rows if r["pi_doc_exact"] == "1/2")
    assert (mid["p1_exact"], mid["p2_exact"], mid["p3_exact"], mid["p4_exact"]) == ("63/71", "111/110", "128/191", "139/310")


def test_csv_round_trip(tmp_path):
    assert main(["thresholds", "--out", str(tmp_path), "--grid", "pi_doc:1/10:9/10:1/10"]) == 0
    for row in _rows(tmp_path / "thresholds.csv"):
        for name in ("p1", "p2", "p3", "p4"):
            exact = F(row[f"{name}_exact"])
            assert abs(F(row[name]) - exact) <= F(1, 2 * 10**12)
            assert len(row[name].split(".")[1]) == 12


def test_thresholds_match_library(tmp_path):
    assert main(["thresholds", "--out", str(tmp_path), "--grid", "gamma:1/5:2/5:1/10"]) == 0
    from persuasion.model import canonical_params
    for row in _rows(tmp_path / "thresholds.csv"):
        p = canonical_params(gamma=F(row["gamma_exact"]))
        assert F(row["p1_exact"]) == thresholds.p1(p)


def test_empty_valid_grid_exits_two(tmp_path, capsys):
    code = main(["thresholds", "--out", str(tmp_path), "--grid", "lambda:9/10:1:1/10"])
    assert code == 2
    assert not (tmp_path / "thresholds.csv").exists()
    assert (tmp_path / "thresholds_invalid.json").exists()
    assert "no valid grid points" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["thresholds", "--grid", "pi_doc:1:0:1/10"],
    ["thresholds", "--grid", "pi_doc:0:1"],
    ["thresholds", "--grid", "zeta:0:1:1/2"],
    ["posterior", "--x-doc", "01", "--w-doc", "L"],
])
def test_invalid_input_exits_two(tmp_path, argv, capsys):
    # malformed flags are rejected by the argument parser, which exits with the same code
    try:
        code = main(argv + ["--out", str(tmp_path)])
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_bad_params_file(tmp_path):
    assert main(["verify", "--params", str(_params(tmp_path, gamma="3/2")), "--out", str(tmp_path)]) == 2
    assert main(["verify", "--params", str(tmp_path / "missing.json"), "--out", str(tmp_path)]) == 2
    (tmp_path / "junk.json").write_text("[1, 2]", encoding="utf-8")
    assert main(["verify", "--params", str(tmp_path / "junk.json"), "--out", str(tmp_path)]) == 2


def test_seed_must_be_u64(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["montecarlo", "--seed", str(2**64), "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_verify_single_point(tmp_path):
    assert main(["verify", "--params", str(_params(tmp_path)), "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "verify_report.json").read_text(encoding="utf-8"))
    assert report["ok"] and report["grid_points"] == 1


def test_verify_grid(tmp_path):
    assert main(["verify", "--grid", "pi_doc:3/10:7/10:1/5", "--out", str(tmp_path)]) == 0


def test_verify_fault_injection_exits_one(tmp_path, monkeypatch, capsys):
    real = thresholds.p3
    monkeypatch.setattr(thresholds, "p3", lambda p: real(p) * F(1001, 1000))
    assert main(["verify", "--params", str(_params(tmp_path)), "--out", str(tmp_path)]) == 1
    assert "counterexample" in capsys.readouterr().err


def test_career(tmp_path):
    assert main(["career", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "career.csv")
    assert len(rows) == 21
    for row in rows:
        if row["below_tau_bar"] == "1":
            assert F(row["difference_exact"]) >= F(row["lower_bound_exact"]) > 0
    summary = json.loads((tmp_path / "career_summary.json").read_text(encoding="utf-8"))
    assert summary["delta"] == "69/5000" and summary["tau_bar"] == "69/5069"


def test_career_infeasible(tmp_path):
    path = _params(tmp_path, **{"lambda": "2/5"})
    assert main(["career", "--params", str(path), "--out", str(tmp_path)]) == 2


def test_freeride(tmp_path):
    assert main(["freeride", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "freeride.csv")
    inside = [r for r in rows if r["in_interval"] == "1"]
    assert inside
    for row in inside:
        assert int(row["draws_uninterpretable"]) > int(row["draws_interpretable"])
        assert F(row["gap_exact"]) > 0
    summary = json.loads((tmp_path / "freeride_summary.json").read_text(encoding="utf-8"))
    assert summary["c1"] == "469/7038" and summary["c2"] == "69/862"


def test_freeride_rejects_noisy_ai(tmp_path):
    path = _params(tmp_path, p_doc="19/20")
    assert main(["freeride", "--params", str(path), "--out", str(tmp_path)]) == 2


def test_posterior_single(tmp_path, capsys):
    argv = ["posterior", "--x-doc", "01", "--w-doc", "L", "--a", "1", "--out", str(tmp_path)]
    assert main(argv) == 0
    out = json.loads(capsys.readouterr().out)
    # doctor reads L as critical and sees only R abnormal; the AI says positive
    assert out["posterior"] == "26/33" and out["f"] == 1


def test_posterior_table(tmp_path):
    assert main(["posterior", "--out", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "posterior.csv")) == 80


def test_attribution(tmp_path, capsys):
    assert main(["attribution", "--out", str(tmp_path)]) == 0
    for row in _rows(tmp_path / "attribution.csv"):
        assert F(row["w_atten_exact"]) + F(row["w_comp_exact"]) == 1
    argv = ["attribution", "--x-doc", "01", "--w-doc", "L", "--d", "0", "--a", "1", "--out", str(tmp_path)]
    assert main(argv) == 0


def test_montecarlo(tmp_path):
    argv = ["montecarlo", "--n", "200000", "--seed", "99", "--out", str(tmp_path)]
    assert main(argv) == 0
    first = (tmp_path / "montecarlo.csv").read_bytes()
    assert main(argv + ["--jobs", "2"]) == 0
    assert (tmp_path / "montecarlo.csv").read_bytes() == first


def test_common_flags_before_subcommand(tmp_path):
    assert main(["--out", str(tmp_path), "thresholds"]) == 0
    assert (tmp_path / "thresholds.csv").exists()


def test_parse_grid():
    g = parse_grid("p_doc:1/2:1:1/4")
    assert g.values() == [F(1, 2), F(3, 4), F(1)]
    with pytest.raises(InvalidParams):
        parse_grid("p_doc:1/2:1:0")
