"""Exception hierarchy shared by every module."""


class PersuasionError(Exception):
    """Base class for all library errors."""


class InvalidParams(PersuasionError, ValueError):
    """Parameters violate a model assumption or a field range."""

    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = tuple(failures)


class NullEvent(PersuasionError):
    """Conditioning event has probability zero."""


class Unrealizable(PersuasionError):
    """A signal profile or information set cannot occur under the model."""


class NonMonotonePosterior(PersuasionError):
    """The posterior is not linear-fractional in p_doc, so a threshold is ill-defined."""


class InfeasibleConstruction(PersuasionError):
    """A requested parameter construction has an empty feasible region."""


class InvariantViolation(PersuasionError):
    """A claimed property failed on concrete parameters."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample
