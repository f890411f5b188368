"""Exception types shared across the package."""


class GaussTopoError(Exception):
    """Base class for all package errors."""


class ValidationError(GaussTopoError):
    """Invalid argument or domain violation (bad shapes, ranges, kinds)."""


class IllConditionedGraphError(GaussTopoError):
    """U part of a graph is numerically singular beyond the allowed condition number."""


class SingularPivotError(GaussTopoError):
    """Pivot entry for a p-measurement is below tolerance."""


class SingularTransformError(GaussTopoError):
    """(A + BZ) is singular in a symplectic graph update."""


class UnsupportedStateError(GaussTopoError):
    """Operation requires a q/p block-diagonal covariance matrix."""


class FitFailedError(GaussTopoError):
    """Least-squares fit did not converge within the iteration budget."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals
