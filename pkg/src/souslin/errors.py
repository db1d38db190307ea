"""Exception types raised across the package."""


class SouslinError(Exception):
    pass


class OutOfRange(SouslinError, IndexError):
    pass


class InvalidArgs(SouslinError, ValueError):
    pass


class OutOfInterval(SouslinError, ValueError):
    pass


class PreconditionFailed(SouslinError):
    pass


class UnsupportedMap(SouslinError, KeyError):
    pass


class WrongSide(SouslinError, ValueError):
    pass


class NoBasePoint(SouslinError):
    """No fruit candidate of a branch passed the bounded base-branch check.

    ``failures`` maps each rejected candidate to the failing evidence.
    """

    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = failures or []


class BudgetExhausted(SouslinError):
    """Raised by the diagonalizer; the partial trace rides along."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
