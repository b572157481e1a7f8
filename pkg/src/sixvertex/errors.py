"""Exception types shared across the package."""


class SixVertexError(Exception):
    """Base class for all package errors."""


class DomainError(SixVertexError):
    """An argument lies outside the mathematical domain of the operation."""


class NonConvergence(SixVertexError):
    """An iterative or adaptive scheme exhausted its budget.

    Carries the best value so far in ``.best`` and the last error
    estimate in ``.estimate`` when those are meaningful.
    """

    def __init__(self, message, best=None, estimate=None):
        super().__init__(message)
        self.best = best
        self.estimate = estimate


class TailNotDecaying(SixVertexError):
    """The automatic decay probe of a half-line integrand failed."""


class SizeLimit(SixVertexError):
    """A brute-force operation was requested beyond its supported size."""


class StripViolation(SixVertexError):
    """A requested integration contour does not fit inside the analyticity strip."""


class SingularMinor(SixVertexError):
    """A leading principal minor vanished where positivity is guaranteed.

    This is an internal consistency failure, not a user error.
    """
