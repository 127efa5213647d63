"""Physicists' Hermite polynomials and oscillator eigenfunctions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


def hermite_poly(n: int, x):
    """``H_n(x)`` by the recurrence ``H_{k+1} = 2x H_k - 2k H_{k-1}``.

    Works elementwise on arrays and on any number type supporting ``+`` and
    ``*`` (so exact ``Fraction`` or complex arguments are fine).
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    h_prev, h = 1, 2 * x
    if n == 0:
        return x * 0 + 1
    for k in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h


def hermite_normalized_table(n_max: int, x):
    """``H_k(x) / sqrt(2**k k!)`` for ``k = 0..n_max``, stacked on axis 0.

    The scaled recurrence keeps values O(exp(x**2/2)) instead of factorial.
    """
    x = np.asarray(x)
    out = np.empty((n_max + 1,) + x.shape, dtype=np.result_type(x, float))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x
    for k in range(1, n_max):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * x * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


@dataclass(frozen=True)
class HermiteBasis:
    """Oscillator eigenfunctions ``phi_0 .. phi_{n_max}`` for given m, omega, hbar."""

    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0
    n_max: int = 64

    def __post_init__(self):
        if self.n_max < 8:
            raise DomainError("n_max must be >= 8")
        if not (self.mass > 0 and self.omega > 0 and self.hbar > 0):
            raise DomainError("mass, omega and hbar must be positive")

    @classmethod
    def from_params(cls, p, omega: float, n_max: int) -> "HermiteBasis":
        return cls(p.mass, omega, p.hbar, n_max)

    @property
    def length(self) -> float:
        """Oscillator length ``sqrt(hbar / (m omega))``."""
        return math.sqrt(self.hbar / (self.mass * self.omega))

    def xi(self, q):
        return np.asarray(q) / self.length

    def table(self, q, n_top: int | None = None):
        """``phi_k(q)`` for ``k = 0..n_top`` (default ``n_max``), shape ``(n_top+1,) + q.shape``."""
        n_top = self.n_max if n_top is None else n_top
        if n_top > self.n_max:
            raise DomainError(f"index {n_top} exceeds n_max={self.n_max}")
        x = self.xi(q)
        norm = (self.mass * self.omega / (math.pi * self.hbar)) ** 0.25
        return hermite_normalized_table(n_top, x) * (norm * np.exp(-0.5 * x * x))


def phi_n(basis: HermiteBasis, n: int, q):
    """Normalized oscillator eigenfunction ``phi_n(q)``."""
    if not 0 <= n <= basis.n_max:
        raise DomainError(f"n={n} outside 0..{basis.n_max}")
    return basis.table(q, n)[n]
