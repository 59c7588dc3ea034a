"""Exception hierarchy shared by every reclab module."""


class ReclabError(Exception):
    """Base class for all reclab errors."""


class UsageError(ReclabError, ValueError):
    """Malformed input: bad spec strings, invalid parameters, empty grids."""


class DomainError(ReclabError, ValueError):
    """An argument lies outside the support or the admissible range."""


class ParameterCapError(DomainError):
    """Integer parameters too large for double-precision factorial ratios."""


class NumericalError(ReclabError, ArithmeticError):
    """Quadrature failed to converge.

    ``estimates`` holds the last two successive estimates so callers can
    judge how far from convergence the integral was.
    """

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class BudgetExceededError(ReclabError, RuntimeError):
    """The naive record sampler ran out of iid draws."""

    def __init__(self, message, records_found=0, draws=0):
        super().__init__(message)
        self.records_found = records_found
        self.draws = draws
