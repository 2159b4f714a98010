"""Exception types raised across the package."""


class SphereDubinsError(Exception):
    """Base class for all package errors."""


class NotSkew(SphereDubinsError, ValueError):
    """A matrix expected to be antisymmetric is not."""


class NotUnit(SphereDubinsError, ValueError):
    """A vector expected to have unit length does not."""


class NotRotation(SphereDubinsError, ValueError):
    """A matrix is not a proper rotation within tolerance."""


class DomainError(SphereDubinsError, ValueError):
    """An argument lies outside the domain where a formula holds."""


class SolveFailed(SphereDubinsError, RuntimeError):
    """A Newton solve did not reach the requested residual."""


class NoPathFound(SphereDubinsError):
    """No candidate family produced a path to the goal."""


class Degenerate(SphereDubinsError):
    """The adjoint anchor of a path is undefined."""
