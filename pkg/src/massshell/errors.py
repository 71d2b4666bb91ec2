"""Exception hierarchy shared across the package."""


class MassShellError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MassShellError, ValueError):
    """Input outside the mathematical domain of an operation."""


class OffShellError(DomainError):
    """Momentum point violates the mass-shell constraint beyond tolerance."""


class UnsupportedDimensionError(DomainError):
    """Operation only available for specific spatial dimensions."""


class NonNormalizableError(DomainError):
    """Requested density does not exist for these parameters."""


class InfiniteMomentError(DomainError):
    """Requested theoretical moment diverges."""


class CoordinateSingularityError(MassShellError, RuntimeError):
    """Cartesian simulation reached a removable coordinate singularity."""


class IntegratorFailureError(MassShellError, RuntimeError):
    """Implicit solve could not be completed (no bracket / no convergence)."""


class QuadratureError(MassShellError, RuntimeError):
    """Numerical quadrature failed to converge; carries partial values."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
