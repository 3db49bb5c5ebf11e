import json
from fractions import Fraction as F

import pytest

from persuasion.errors import InvalidParams
from persuasion.model import (ModelParams, Outcome, canonical_params, feasible_comprehension_floor, joint_probability,
                              load_params, params_from_mapping, phi_ai_floor, validate_params)
from persuasion.oracle import enumerate_outcomes
from persuasion.rational import INF, format_decimal, parse_fraction, ratio, to_fraction


def test_decimal_strings_are_exact():
    assert to_fraction("0.3") == F(3, 10)
    assert to_fraction(0.1) == F(1, 10)
    assert to_fraction("7/9") == F(7, 9)


def test_format_decimal_round_trip():
    for value in (F(63, 71), F(111, 110), F(-1, 3), F(0), F(1, 2)):
        text = format_decimal(value)
        assert abs(parse_fraction(text) - value) <= F(1, 2 * 10**12)


def test_ratio_infinity():
    assert ratio(F(1), F(0)) is INF
    assert INF > F(10**9)
    assert ratio(F(1), F(2)) == F(1, 2)


def test_canonical_point_passes_every_check(canon):
    report = validate_params(canon)
    assert report.ok, report.summary()


def test_low_doctor_skill_fails_skill_check():
    report = validate_params(canonical_params(p_doc=F(6, 10)))
    assert report.failed("skill-doctor")
    assert not report.failed("skill-ai")


def test_noise_above_prior_fails():
    report = validate_params(canonical_params(lam=F(6, 10)))
    assert report.failed("prior-noise")


def test_out_of_range_field_rejected():
    with pytest.raises(InvalidParams):
        ModelParams(gamma=F(3, 2), lam=F(1, 5), pi_doc=F(1, 2), p_doc=F(3, 4), pi_ai=F(3, 5), p_ai=F(4, 5))


def test_comprehension_floors():
    assert feasible_comprehension_floor(canonical_params(), "doctor") == F(27, 38)
    assert feasible_comprehension_floor(canonical_params(pi_doc=F(1)), "doctor") == F(12, 19)
    assert feasible_comprehension_floor(canonical_params(gamma=F(1, 5), pi_doc=F(1)), "doctor") == F(1, 2)


def test_zero_probability_when_critical_bit_differs_from_disease(canon):
    o = Outcome(1, (0, 0), 0, (0, 0), 0, (0, 0), 0)
    assert joint_probability(canon, o) == 0


def test_deterministic_single_path():
    p = ModelParams(gamma=F(3, 10), lam=F(1, 5), pi_doc=F(1), p_doc=F(1), pi_ai=F(1), p_ai=F(1))
    o = Outcome(1, (1, 0), 0, (1, 0), 0, (1, 0), 0)
    assert joint_probability(p, o, strict=False) == F(3, 25)


def test_deterministic_support_size():
    # both critical dimensions times (disease, healthy with and without a noise abnormality),
    # plus the diseased patient whose noise dimension is also abnormal
    p = ModelParams(gamma=F(3, 10), lam=F(1, 5), pi_doc=F(1), p_doc=F(1), pi_ai=F(1), p_ai=F(1))
    atoms = enumerate_outcomes(p, strict=False)
    assert len(atoms) == 8
    assert sum(pr for _, pr in atoms) == 1


def test_probabilities_sum_to_one(canon, halluc):
    for p in (canon, halluc):
        assert sum(pr for _, pr in enumerate_outcomes(p)) == 1
        assert sum(pr for _, pr in enumerate_outcomes(p, with_extra=True)) == 1


def test_params_json_schema(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"gamma": "0.3", "lambda": "0.2", "pi_doc": "0.5", "p_doc": "0.75",
                                "pi_ai": "0.6", "p_ai": "0.8", "tau": "0.01"}))
    p, extras = load_params(path)
    assert p == canonical_params()
    assert extras == {"tau": F(1, 100)}


def test_params_unknown_and_missing_keys():
    with pytest.raises(InvalidParams):
        params_from_mapping({"gamma": "0.3"})
    with pytest.raises(InvalidParams):
        params_from_mapping({**canonical_params().describe(), "bogus": 1})


def test_hallucination_bound(halluc):
    assert validate_params(halluc).ok
    below = halluc.with_(phi_ai=phi_ai_floor(halluc))
    assert validate_params(below).failed("hallucination-rate")
