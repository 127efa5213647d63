"""Perturbed oscillator states and energies, and the matrix oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..numerics import symmetric_eigen
from ..params import GupParams
from .hermite import HermiteBasis


def _gamma(p: GupParams) -> float:
    # coefficient of p0^4 / m in the Hamiltonian
    return 0.5 * p.alpha**2 + p.beta


def energy_n(p: GupParams, basis: HermiteBasis, n: int) -> float:
    """First-order level ``(n + 1/2) hbar w [1 + 3(2n^2+2n+1)/(2(2n+1)) (a^2/2 + b) m hbar w]``.

    Only the quartic term contributes at first order; the second-order shift
    from the cubic term (also of order alpha**2) is not included.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    hw = basis.hbar * basis.omega
    ratio = 3 * (2 * n * n + 2 * n + 1) / (2 * (2 * n + 1))
    return (n + 0.5) * hw * (1 + ratio * _gamma(p) * basis.mass * hw)


def energy_beta_slope(basis: HermiteBasis, n: int) -> float:
    """``dE_n/dbeta = 3 (2n^2+2n+1) m hbar^2 w^2 / 4``."""
    return 0.75 * (2 * n * n + 2 * n + 1) * basis.mass * (basis.hbar * basis.omega) ** 2


def psi_coefficients(p: GupParams, basis: HermiteBasis, n: int) -> dict[int, complex]:
    """Expansion ``psi_n = sum_k c_k phi_k`` to first order in alpha and (alpha^2/2 + beta)."""
    m, w, hb = basis.mass, basis.omega, basis.hbar
    ca = -1j * p.alpha / (m * hb * w) * (hb * m * w / 2) ** 1.5
    cb = _gamma(p) * m * hb * w
    c = {n: 1.0 + 0j}

    def add(k, v):
        if k >= 0 and v:
            c[k] = c.get(k, 0) + v

    add(n - 3, ca * math.sqrt(n * (n - 1) * (n - 2)) / 3 if n >= 3 else 0)
    add(n - 1, ca * (-3 * n * math.sqrt(n)))
    add(n + 1, ca * (-3 * (n + 1) * math.sqrt(n + 1)))
    add(n + 3, ca * math.sqrt((n + 1) * (n + 2) * (n + 3)) / 3)
    add(n + 2, cb * (2 * n + 3) * math.sqrt((n + 1) * (n + 2)) / 4)
    add(n - 2, -cb * (2 * n - 1) * math.sqrt(n * (n - 1)) / 4 if n >= 2 else 0)
    add(n - 4, cb * math.sqrt(n * (n - 1) * (n - 2) * (n - 3)) / 16 if n >= 4 else 0)
    add(n + 4, -cb * math.sqrt((n + 1) * (n + 2) * (n + 3) * (n + 4)) / 16)
    return c


def psi_n(p: GupParams, basis: HermiteBasis, n: int, q):
    """Perturbed eigenfunction at ``q``; needs ``n <= n_max - 4``."""
    if not 0 <= n <= basis.n_max - 4:
        raise DomainError(f"n={n} outside 0..n_max-4={basis.n_max - 4}")
    tab = basis.table(q, n + 4)
    return sum(v * tab[k] for k, v in psi_coefficients(p, basis, n).items())


def momentum_matrix(basis: HermiteBasis, size: int) -> np.ndarray:
    """``p0 = i sqrt(m hbar w / 2)(a^dagger - a)`` on ``size`` oscillator states."""
    off = np.sqrt(np.arange(1, size))
    lower = np.diag(off, -1)  # a^dagger: <n+1|a^dagger|n> = sqrt(n+1)
    scale = math.sqrt(basis.mass * basis.hbar * basis.omega / 2)
    return 1j * scale * (lower - lower.T)


def hamiltonian_matrix(p: GupParams, basis: HermiteBasis) -> np.ndarray:
    """``H0 - (alpha/m) p0^3 + ((alpha^2/2 + beta)/m) p0^4`` on ``n_max`` states.

    Powers are formed on a padded space so that every retained element is
    exact; the result is made exactly Hermitian.
    """
    size = basis.n_max
    if size < 16:
        raise DomainError("n_max must be >= 16 for the matrix oracle")
    P = momentum_matrix(basis, size + 4)
    P2 = P @ P
    P3 = (P2 @ P)[:size, :size]
    P4 = (P2 @ P2)[:size, :size]
    hw = basis.hbar * basis.omega
    H = np.diag((np.arange(size) + 0.5) * hw).astype(complex)
    H += -p.alpha / basis.mass * P3 + _gamma(p) / basis.mass * P4
    return 0.5 * (H + H.conj().T)


@dataclass(frozen=True)
class Spectrum:
    energies: np.ndarray
    order: str  # "perturbative" or "numeric"

    def __len__(self):
        return len(self.energies)


def perturbative_spectrum(p: GupParams, basis: HermiteBasis, levels: int) -> Spectrum:
    return Spectrum(np.array([energy_n(p, basis, n) for n in range(levels)]), "perturbative")


def diagonalize_oracle(matrix, herm_tol: float = 1e-12) -> Spectrum:
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi.

    A complex Hermitian ``A = X + iY`` is embedded as the real symmetric
    ``[[X, -Y], [Y, X]]``, whose spectrum is that of ``A`` with every value
    doubled; one copy of each pair is returned.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("matrix must be square")
    scale = max(np.linalg.norm(a), 1.0)
    if np.max(np.abs(a - a.conj().T), initial=0.0) > herm_tol * scale:
        raise DomainError("matrix is not Hermitian")
    if np.iscomplexobj(a) and np.any(a.imag != 0):
        x, y = a.real, a.imag
        big = np.block([[x, -y], [y, x]])
        ev = symmetric_eigen(big)
        return Spectrum(ev[::2].copy(), "numeric")
    return Spectrum(symmetric_eigen(np.real(a)), "numeric")
