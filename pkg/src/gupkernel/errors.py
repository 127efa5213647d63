"""Exception hierarchy shared by every module.

Physics and domain failures derive from :class:`GupError` so callers (the CLI
in particular) can turn them into structured error documents.
"""


class GupError(Exception):
    """Base class for all library errors."""


class DomainError(GupError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class ImaginaryRootError(DomainError):
    """The velocity bound is complex (2*beta - 7*alpha**2 < 0)."""


class DegenerateError(DomainError):
    """beta == 4*alpha**2 makes the velocity-bound denominator vanish."""


class CausticError(DomainError):
    """sin(omega*T) is too close to zero for the harmonic closed forms."""


class ConvergenceError(GupError):
    """An iterative or series evaluation failed to converge."""


class NoConvergenceError(ConvergenceError):
    """Shooting could not bracket or hit the target boundary value."""


class QuadratureError(ConvergenceError):
    """Iterated quadrature did not settle under refinement."""


class MagnitudeError(GupError, OverflowError):
    """A partial sum left the representable floating point range."""


class NumericError(GupError, ArithmeticError):
    """A non-finite value appeared during integration."""


class BracketError(DomainError):
    """The supplied interval does not bracket a sign change."""


class SingularDynamicsError(GupError):
    """The kinetic factor of the Euler-Lagrange equation reached zero."""


class StabilityError(GupError):
    """Reweighting left the perturbative regime."""


class StructureError(GupError):
    """A term sum does not have the structure an operation expects."""


class InconsistencyError(GupError):
    """A system of coefficient equations has no solution."""
