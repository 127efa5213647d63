import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import hermite as nph

from gupkernel.classical import Boundary
from gupkernel.errors import ConvergenceError, DomainError, MagnitudeError
from gupkernel.kernels import ho_kernel_semiclassical
from gupkernel.params import GupParams
from gupkernel.spectral import (HermiteBasis, diagonalize_oracle, energy_beta_slope, energy_n,
                                hamiltonian_matrix, hermite_poly, mehler_closed, mehler_partial,
                                mehler_terms, momentum_matrix, phi_n, psi_coefficients, psi_n,
                                spectral_kernel, spectral_pieces, tilde_factors, tilde_kernel)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 12])
def test_hermite_matches_numpy(n):
    x = np.linspace(-3, 3, 13)
    want = nph.hermval(x, [0] * n + [1])
    assert np.allclose(hermite_poly(n, x), want, rtol=1e-13, atol=1e-13)


def test_eigenfunctions_orthonormal():
    basis = HermiteBasis(1.7, 0.6, 0.9, 30)
    xg, wg = nph.hermgauss(60)
    q = xg * basis.length
    tab = basis.table(q) * np.exp(0.5 * xg**2)
    gram = (tab * wg) @ tab.T * basis.length
    assert np.max(np.abs(gram - np.eye(31))) < 1e-12


def test_ground_state_value():
    basis = HermiteBasis()
    assert phi_n(basis, 0, 0.0) == pytest.approx(math.pi**-0.25, rel=1e-15)


def test_energy_examples():
    basis = HermiteBasis()
    assert energy_n(GupParams(), basis, 3) == 3.5
    assert energy_n(GupParams(0.0, 1e-3), basis, 0) == pytest.approx(0.5 + 0.75e-3, rel=1e-15)
    slope = energy_beta_slope(basis, 4)
    assert energy_n(GupParams(0.0, 1e-3), basis, 4) - 4.5 == pytest.approx(1e-3 * slope, rel=1e-12)
    # alpha enters only as alpha^2 / 2 alongside beta
    assert energy_n(GupParams(0.02, 0.0), basis, 2) == pytest.approx(
        energy_n(GupParams(0.0, 2e-4), basis, 2), rel=1e-15)
    with pytest.raises(DomainError):
        energy_n(GupParams(), basis, -1)


@pytest.mark.parametrize("n", [0, 3, 6])
def test_psi_coefficients_against_matrix_perturbation(n):
    basis = HermiteBasis(1.0, 1.0, 1.0, 40)
    a, b = 1e-3, 2e-4
    H0 = hamiltonian_matrix(GupParams(), basis)
    H1 = hamiltonian_matrix(GupParams(a, b), basis) - H0
    E = np.real(np.diag(H0))
    c = psi_coefficients(GupParams(a, b), basis, n)
    for k in range(20):
        if k == n:
            continue
        want = H1[k, n] / (E[n] - E[k])
        assert abs(c.get(k, 0) - want) < 1e-12 * max(1.0, abs(want)) + 1e-15


def test_psi_reduces_to_phi():
    basis = HermiteBasis(n_max=20)
    q = np.linspace(-2, 2, 9)
    assert np.allclose(psi_n(GupParams(), basis, 5, q), phi_n(basis, 5, q))
    with pytest.raises(DomainError):
        psi_n(GupParams(), basis, 17, q)


def test_momentum_matrix_commutator():
    basis = HermiteBasis(1.3, 0.8, 0.7, 30)
    P = momentum_matrix(basis, 30)
    X = basis.length / math.sqrt(2) * (np.diag(np.sqrt(np.arange(1, 30)), 1)
                                       + np.diag(np.sqrt(np.arange(1, 30)), -1))
    comm = X @ P - P @ X
    assert np.allclose(np.diag(comm)[:-1], 1j * basis.hbar, atol=1e-13)


def test_diagonalize_oracle_matches_numpy():
    basis = HermiteBasis(n_max=40)
    H = hamiltonian_matrix(GupParams(0.02, 0.003), basis)
    got = diagonalize_oracle(H).energies
    assert np.allclose(got, np.linalg.eigvalsh(H), atol=1e-11)


def test_diagonalize_oracle_rejects_non_hermitian():
    with pytest.raises(DomainError):
        diagonalize_oracle(np.array([[1.0, 2.0], [0.0, 1.0]]))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**31))
def test_diagonalize_random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a = a + a.conj().T
    assert np.allclose(diagonalize_oracle(a).energies, np.linalg.eigvalsh(a), atol=1e-10)


def test_small_beta_spectrum_follows_first_order():
    basis = HermiteBasis(n_max=120)
    ev = diagonalize_oracle(hamiltonian_matrix(GupParams(0.0, 1e-5), basis)).energies
    for n in range(6):
        shift = ev[n] - (n + 0.5)
        assert shift / (1e-5 * energy_beta_slope(basis, n)) == pytest.approx(1.0, abs=2e-3)


def test_mehler_classic_case():
    t, x, y = 0.2, 0.4, -0.7
    d = 1 - 4 * t * t
    want = d**-0.5 * math.exp((4 * t * x * y - 4 * t * t * (x * x + y * y)) / d)
    assert mehler_closed(0, 0, t, x, y) == pytest.approx(want, rel=1e-14)
    assert mehler_closed(2, 3, 0.0, x, y) == pytest.approx(hermite_poly(2, x) * hermite_poly(3, y))


@pytest.mark.parametrize("m,n", [(0, 0), (1, 3), (4, 2), (4, 4)])
def test_mehler_partial_converges(m, n):
    for t in (-0.2, 0.1, 0.25j):
        c = mehler_closed(m, n, t, 0.6, -1.1)
        s = mehler_partial(m, n, t, 0.6, -1.1, 150)
        assert abs(s - c) <= 1e-11 * max(1.0, abs(c))


def test_mehler_guards():
    with pytest.raises(ConvergenceError):
        mehler_closed(0, 0, 0.5, 0.0, 0.0)
    with pytest.raises(MagnitudeError):
        mehler_terms(0, 0, 0.9, 1.0, 1.0, 2000)
    with pytest.raises(DomainError):
        mehler_closed(9, 0, 0.1, 0.0, 0.0)


def test_spectral_kernel_undeformed_is_mehler_kernel():
    basis = HermiteBasis(n_max=120)
    for q0, qf, tau in [(0.0, 0.0, 1.0), (0.2, 0.5, 0.7)]:
        b = Boundary.euclidean(q0, qf, tau, 1.0)
        sp = spectral_kernel(GupParams(), basis, b).amplitude
        s = math.sinh(tau)
        exact = math.sqrt(1 / (2 * math.pi * s)) * math.exp(
            -((q0**2 + qf**2) * math.cosh(tau) - 2 * q0 * qf) / (2 * s))
        assert sp == pytest.approx(exact, rel=1e-12)


def test_spectral_guards():
    basis = HermiteBasis(n_max=40)
    with pytest.raises(ConvergenceError):
        spectral_pieces(basis, 0.0, 0.1, 1.0, 20)
    with pytest.raises(DomainError):
        spectral_pieces(basis, 0.0, 0.1, -1j, 37)


@pytest.mark.parametrize("q0,qf,tau", [(0.2, 0.5, 1.0), (-0.4, 0.7, 0.6), (0.0, 0.0, 1.0)])
def test_three_routes_agree(q0, qf, tau):
    basis = HermiteBasis(2.0, 0.7, 1.3, 160)
    p = GupParams(0.0, 0.0, None, 2.0, 1.3)
    b = Boundary.euclidean(q0, qf, tau, 0.7)
    sp = spectral_kernel(p, basis, b).meta
    tk = tilde_kernel(p, basis, b).meta
    sc = ho_kernel_semiclassical(b, p).meta
    scale = abs(sp["undeformed"])
    for key in ("undeformed", "slope_alpha", "slope_beta"):
        assert abs(sp[key] - tk[key]) <= 1e-9 * scale
        assert abs(sp[key] - sc[key]) <= 1e-9 * scale


def test_alpha_slope_vanishes_at_coincident_points():
    basis = HermiteBasis(n_max=60)
    tf = tilde_factors(GupParams(), basis, Boundary.euclidean(0.3, 0.3, 1.0, 1.0))
    assert tf["M1"] == 0 and tf["M2"] == 0 and tf["J"] == 1
