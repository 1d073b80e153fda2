"""Exception and warning types."""


class BimultError(Exception):
    """Base class for errors raised by this package."""


class DomainError(BimultError, ValueError):
    """An argument lies outside the domain of the operation (e.g. p <= 0)."""


class ConfigurationError(BimultError, ValueError):
    """Grid, quadrature or window settings cannot support the request."""


class GridMismatchError(ConfigurationError):
    """Two sampled functions live on different grids."""


class AccuracyError(BimultError, ArithmeticError):
    """A numerical precondition failed; ``measured`` holds the offending quantity."""

    def __init__(self, message, measured=None):
        super().__init__(message)
        self.measured = measured


class TruncationWarning(UserWarning):
    """A finite sum or shift was cut off by the grid extent."""


class HypothesisWarning(UserWarning):
    """A decay hypothesis could not be confirmed inside the truncation window."""


class TrialError(BimultError, RuntimeError):
    """Operator evaluation failed inside a seeded trial; ``trial`` holds its index."""

    def __init__(self, message, trial=None):
        super().__init__(message)
        self.trial = trial
