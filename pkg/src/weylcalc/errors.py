"""Exception types raised across the package."""


class WeylCalcError(Exception):
    """Base class for all package errors."""


class InvalidGrid(WeylCalcError, ValueError):
    pass


class ShapeError(WeylCalcError, ValueError):
    pass


class UnsupportedOrder(WeylCalcError, ValueError):
    pass


class DomainError(WeylCalcError, ValueError):
    pass


class ConvergenceError(WeylCalcError, RuntimeError):
    """Power iteration did not reach the requested tolerance.

    The last iterate and its Rayleigh estimate are kept so callers can
    decide whether the partial answer is usable.
    """

    def __init__(self, message, estimate=None, vector=None):
        super().__init__(message)
        self.estimate = estimate
        self.vector = vector
