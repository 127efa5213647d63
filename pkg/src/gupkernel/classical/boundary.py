"""Boundary data and simple potentials."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import CausticError, DomainError

CAUSTIC_TOL = 1e-6


@dataclass(frozen=True)
class Boundary:
    """Endpoints ``q(0) = q0``, ``q(T) = qf`` and the oscillator frequency.

    ``T`` is normally a positive real time. A Euclidean time ``tau`` is
    represented by the complex value ``T = -1j * tau``; only the closed-form
    kernels and actions accept that, the trajectory code needs real time.
    ``omega = 0`` is the free particle.
    """

    q0: float
    qf: float
    T: complex
    omega: float = 0.0

    def __post_init__(self):
        T = complex(self.T)
        if T == 0 or not (T.real >= 0 and T.imag <= 0) or not np.isfinite(T):
            raise DomainError(f"T must be positive real or -i*tau with tau > 0, got {self.T}")
        if T.real > 0 and T.imag != 0:
            raise DomainError("T must be purely real or purely Euclidean")
        if not self.omega >= 0:
            raise DomainError(f"omega must be >= 0, got {self.omega}")
        if T.imag == 0:
            object.__setattr__(self, "T", float(T.real))

    @classmethod
    def euclidean(cls, q0: float, qf: float, tau: float, omega: float = 0.0) -> "Boundary":
        if not tau > 0:
            raise DomainError("tau must be positive")
        return cls(q0, qf, -1j * tau, omega)

    @property
    def is_euclidean(self) -> bool:
        return isinstance(self.T, complex)

    @property
    def tau(self) -> float:
        """Euclidean duration (``T = -i tau``)."""
        if not self.is_euclidean:
            raise DomainError("boundary is in real time")
        return -self.T.imag

    @property
    def dq(self) -> float:
        return self.qf - self.q0

    def real_time(self) -> float:
        if self.is_euclidean:
            raise DomainError("this operation requires real time")
        return self.T

    def check_caustic(self, tol: float = CAUSTIC_TOL):
        """Raise :class:`CausticError` when ``|sin(omega T)| < tol``."""
        if self.omega == 0:
            raise DomainError("harmonic closed forms need omega > 0")
        s = abs(np.sin(self.omega * self.T))
        if s < tol:
            raise CausticError(f"|sin(omega*T)| = {s:.3g} below caustic tolerance {tol:g}")
        return s


@dataclass(frozen=True)
class FreePotential:
    """``V(q) = 0``."""

    def __call__(self, q):
        return 0.0 * np.asarray(q)

    def gradient(self, q):
        return 0.0 * np.asarray(q)


@dataclass(frozen=True)
class HarmonicPotential:
    """``V(q) = m omega**2 q**2 / 2``."""

    mass: float
    omega: float

    def __call__(self, q):
        q = np.asarray(q)
        return 0.5 * self.mass * self.omega**2 * q * q

    def gradient(self, q):
        return self.mass * self.omega**2 * np.asarray(q)


def potential_for(boundary: Boundary, mass: float):
    """The potential implied by a boundary's frequency."""
    return HarmonicPotential(mass, boundary.omega) if boundary.omega else FreePotential()


def potential_gradient(potential, q, h: float = 1e-6):
    """``V'(q)`` from ``potential.gradient`` or a central difference."""
    grad = getattr(potential, "gradient", None)
    if grad is not None:
        return grad(q)
    step = h * max(1.0, abs(q))
    return (potential(q + step) - potential(q - step)) / (2 * step)


def csc(x):
    return 1 / np.sin(x)


__all__ = ["Boundary", "FreePotential", "HarmonicPotential", "potential_for",
           "potential_gradient", "CAUSTIC_TOL", "csc", "math"]
