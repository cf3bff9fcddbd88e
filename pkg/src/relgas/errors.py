"""Exception types shared across the toolkit.

All numerical-domain failures derive from DomainError so callers (and the
command line front end) can distinguish them from usage errors.
"""


class RelgasError(Exception):
    """Base class for all toolkit errors."""


class DomainError(RelgasError, ValueError):
    """A numerical precondition was violated (maps to CLI exit code 1)."""


class SuperluminalState(DomainError):
    """Flow speed at or above the light speed."""


class SingularDenominator(DomainError):
    """A transformation denominator vanished or left the positive branch."""


class NegativeRadicand(DomainError):
    """A square-root argument was non-positive."""


class ZeroEpsilon(DomainError):
    """The parameter specialisation is singular at eps = 0."""


class ZeroA1(DomainError):
    """The differential relation divides by a1."""


class DegenerateJacobian(DomainError):
    """The coordinate frame map has zero determinant."""


class OrbitLeftDomain(DomainError):
    """An ODE orbit left the valid region; carries the last valid parameter."""

    def __init__(self, message, last_valid_eps=None):
        super().__init__(message)
        self.last_valid_eps = last_valid_eps


class ToleranceNotMet(DomainError):
    """The adaptive integrator could not satisfy the requested tolerance."""


class NonClosedForm(DomainError):
    """Loop integrals of a coordinate 1-form exceed the solution tolerance."""


class NonMonotoneCoordinates(DomainError):
    """A starred coordinate failed strict monotonicity along its axis."""


class UnphysicalManufacture(DomainError):
    """A manufactured field violates positivity or subluminality margins."""


class InsufficientResolutions(DomainError):
    """A convergence study needs at least two grid resolutions."""
