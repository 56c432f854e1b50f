"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class HypothesisError(ValueError):
    """A hypothesis of a lemma or theorem is violated.

    The message names the failed inequality.
    """


class AccuracyError(RuntimeError):
    """A series or quadrature did not reach the requested accuracy."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class StepSizeError(RuntimeError):
    """Time step too large for the explicit part of a scheme."""


class NoBlowupError(RuntimeError):
    """No blow-up was observed within the search horizon."""
