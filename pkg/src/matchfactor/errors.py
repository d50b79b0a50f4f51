"""Exception hierarchy.

Two families matter to callers: :class:`InvalidInputError` (the input is
malformed or outside an operation's domain) and :class:`NumericalError`
(valid input, but an iterative or combinatorial routine could not finish).
The CLI maps them to exit codes 2 and 3.
"""


class MatchFactorError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(MatchFactorError, ValueError):
    pass


class InvalidMatrixError(InvalidInputError):
    """Entries are the wrong length, negative, NaN or infinite."""


class NotBistochasticError(InvalidInputError):
    pass


class NotStarPositiveError(InvalidInputError):
    """Some row or column has no positive entry."""


class ZeroFactorError(InvalidInputError):
    """A per-index factor is exactly zero, so its logarithm is undefined."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"matching factor at index {index} is zero")


class NumericalError(MatchFactorError, ArithmeticError):
    pass


class ConvergenceError(NumericalError):
    """Sinkhorn scaling did not reach the requested tolerance."""

    def __init__(self, iters_used, residual, matrix=None):
        self.iters_used = iters_used
        self.residual = residual
        self.matrix = matrix
        super().__init__(
            f"sinkhorn did not converge after {iters_used} iterations "
            f"(residual {residual:.3e})"
        )


class MatchingError(NumericalError):
    """No perfect matching on the thresholded support."""


class DecompositionError(NumericalError):
    def __init__(self, message, residual_mass=None):
        self.residual_mass = residual_mass
        super().__init__(message)


class DriftError(NumericalError):
    """A matrix power drifted out of the bistochastic set."""

    def __init__(self, t, residual, allowed):
        self.t = t
        self.residual = residual
        self.allowed = allowed
        super().__init__(
            f"power {t} drifted from bistochastic: residual {residual:.3e} "
            f"exceeds {allowed:.3e}"
        )
