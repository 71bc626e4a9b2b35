"""Exception types raised across the package."""


class ProjAnosovError(Exception):
    """Base class for all package errors."""


class SingularMatrix(ProjAnosovError, ValueError):
    pass


class EigenFailure(ProjAnosovError, ArithmeticError):
    pass


class BadRank(ProjAnosovError, ValueError):
    pass


class BadInput(ProjAnosovError, ValueError):
    pass


class BudgetExceeded(ProjAnosovError, RuntimeError):
    pass


class PointOutside(ProjAnosovError, ValueError):
    pass


class DegenerateChart(ProjAnosovError, ValueError):
    pass


class ImproperBody(ProjAnosovError, ValueError):
    pass


class NotPreserved(ProjAnosovError, ValueError):
    pass


class NoProximalElements(ProjAnosovError, ValueError):
    pass


class LiftInconsistent(ProjAnosovError, ValueError):
    """Sign lifting failed; ``pair`` holds the offending (i, j) sample indices."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class EmptySamples(ProjAnosovError, ValueError):
    pass


class InsufficientData(ProjAnosovError, ValueError):
    pass


class NotLoxodromic(ProjAnosovError, ValueError):
    pass


class BadPartition(ProjAnosovError, ValueError):
    pass


class NonConvergent(ProjAnosovError, ArithmeticError):
    pass
