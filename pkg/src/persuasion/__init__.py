"""Exact-arithmetic model of a doctor weighing an AI's second opinion."""
from .errors import (InfeasibleConstruction, InvalidParams, InvariantViolation, NonMonotonePosterior, NullEvent,
                     PersuasionError, Unrealizable)
from .model import ModelParams, Outcome, canonical_params, load_params, params_from_mapping, validate_params
from .oracle import (Oracle, InformationSet, enumerate_outcomes, exact_threshold_in_p_doc, interpretable_info,
                     oracle_for, posterior_disease, uninterpretable_info)
from .diagnosis import (final_interpretable, final_uninterpretable, initial_diagnosis, lr_interpretable,
                        lr_uninterpretable)
from .thresholds import ThresholdSet, p1, p2, p3, p4, threshold_curve, threshold_set
from .attribution import AttributionRecord, decompose
from .career import PopulationParams, accuracy_delta, construct_career_params, population_accuracy
from .freeride import FreerideParams, cost_interval, freeride_accuracy, freeride_deltas
from .rational import INF

__version__ = "0.1.0"

__all__ = [
    "PersuasionError", "InvalidParams", "NullEvent", "Unrealizable", "NonMonotonePosterior",
    "InfeasibleConstruction", "InvariantViolation", "ModelParams", "Outcome", "canonical_params", "load_params",
    "params_from_mapping", "validate_params", "Oracle", "InformationSet", "enumerate_outcomes",
    "exact_threshold_in_p_doc", "interpretable_info", "oracle_for", "posterior_disease", "uninterpretable_info",
    "final_interpretable", "final_uninterpretable", "initial_diagnosis", "lr_interpretable", "lr_uninterpretable",
    "ThresholdSet", "p1", "p2", "p3", "p4", "threshold_curve", "threshold_set", "AttributionRecord", "decompose",
    "PopulationParams", "accuracy_delta", "construct_career_params", "population_accuracy", "FreerideParams",
    "cost_interval", "freeride_accuracy", "freeride_deltas", "INF",
]
