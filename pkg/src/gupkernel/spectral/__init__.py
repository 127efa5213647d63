"""Oscillator eigenfunctions, perturbed spectrum and spectral kernels."""
from .hermite import HermiteBasis, hermite_normalized_table, hermite_poly, phi_n
from .kernel import alpha_coupling, spectral_kernel, spectral_pieces, tilde_factors, tilde_kernel
from .mehler import mehler_closed, mehler_partial, mehler_terms
from .perturbation import (Spectrum, diagonalize_oracle, energy_beta_slope, energy_n,
                           hamiltonian_matrix, momentum_matrix, perturbative_spectrum,
                           psi_coefficients, psi_n)

__all__ = [
    "HermiteBasis", "Spectrum", "alpha_coupling", "diagonalize_oracle", "energy_beta_slope",
    "energy_n", "hamiltonian_matrix", "hermite_normalized_table", "hermite_poly",
    "mehler_closed", "mehler_partial", "mehler_terms", "momentum_matrix",
    "perturbative_spectrum", "phi_n", "psi_coefficients", "psi_n", "spectral_kernel",
    "spectral_pieces", "tilde_factors", "tilde_kernel",
]
