"""Exception types shared across the package."""


class NumrangeError(Exception):
    """Base class for all package errors."""


class DimensionError(NumrangeError, ValueError):
    """Matrix shapes incompatible with the requested operation."""


class ArgumentError(NumrangeError, ValueError):
    """Scalar argument out of its valid range (e.g. a rank index k)."""


class StructureError(NumrangeError):
    """Input does not carry the structure an operation requires."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConvergenceError(NumrangeError):
    """An iterative decomposition failed to converge."""


class HypothesisError(NumrangeError):
    """Closed-form hypotheses fail; callers fall back to the generic engine."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class UnboundedRegionError(NumrangeError):
    """Half-plane normals leave an angular gap >= pi; intersection may be unbounded."""


class EmptyRegionError(NumrangeError):
    """An operation that needs a nonempty region received an empty one."""


class FitError(NumrangeError):
    """Conic fitting failed (degenerate or collinear input points)."""


class CapacityError(NumrangeError):
    """Combinatorial brute force refused beyond its size cap."""


class NoClosedFormError(NumrangeError):
    """No closed-form route applies to the given matrix."""
