import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gupkernel.classical import Boundary, HarmonicPotential
from gupkernel.errors import DomainError, StabilityError
from gupkernel.kernels import free_kernel
from gupkernel.lattice import (SliceConfig, euclidean_action, euclidean_mc_kernel,
                               free_ratio_prediction, moment_expansion,
                               closed_slice_coefficients, single_slice_propagator,
                               slice_log_weight, sliced_kernel_quadrature)
from gupkernel.params import GupParams
from gupkernel.spectral import HermiteBasis, spectral_kernel, tilde_kernel

HO = HarmonicPotential(1.0, 1.0)


def test_slice_config_validation():
    b = Boundary.euclidean(0.0, 0.1, 1.0)
    cfg = SliceConfig.for_boundary(b, 4, GupParams())
    assert cfg.total_time == pytest.approx(-1j)
    assert cfg.q_extent == pytest.approx(8.0)
    with pytest.raises(DomainError):
        SliceConfig(0, -1j)
    with pytest.raises(DomainError):
        SliceConfig(2, 0.5 + 0.5j)
    with pytest.raises(DomainError):
        SliceConfig(3, -0.5j).check_against(b, GupParams())
    with pytest.raises(DomainError):
        SliceConfig(2, -0.5j, q_extent=1.0).check_against(b, GupParams())
    assert cfg.to_dict()["tau"] == {"re": 0.0, "im": -0.25}


def test_single_slice_is_free_kernel_when_undeformed():
    for tau in (0.7, -0.4j):
        b = Boundary(0.1, 0.6, tau)
        assert single_slice_propagator(0.1, 0.6, tau, GupParams()) == pytest.approx(
            free_kernel(b, GupParams()).amplitude, rel=1e-14)
    with pytest.raises(DomainError):
        single_slice_propagator(0.0, 0.1, -0.3, GupParams())


def test_single_slice_potential_weight():
    tau = -0.3j
    bare = single_slice_propagator(0.2, 0.4, tau, GupParams())
    with_v = single_slice_propagator(0.2, 0.4, tau, GupParams(), HO)
    assert with_v / bare == pytest.approx(math.exp(-0.3 * HO(0.2)), rel=1e-14)


@pytest.mark.parametrize("tau", [0.7, 1.3, -0.4j, -1.1j])
def test_moment_oracle_matches_slice_coefficients(tau):
    me, pr = moment_expansion(tau, 1.3, 0.8), closed_slice_coefficients(tau, 1.3, 0.8)
    for part in ("phase", "bracket"):
        for key, want in getattr(pr, part).items():
            got = getattr(me, part)[key]
            n = max(len(got), len(want))
            g, w = np.pad(got, (0, n - len(got))), np.pad(want, (0, n - len(want)))
            assert np.allclose(g, w, rtol=1e-10, atol=1e-12)


def test_euclidean_action_examples():
    path = np.array([0.0, 0.5, 1.0])
    assert euclidean_action(path, 0.5, GupParams()) == pytest.approx(0.5)
    # the alpha term is odd in velocity and turns imaginary
    s = euclidean_action(path, 0.5, GupParams(0.01, 0.0))
    assert s.imag == pytest.approx(0.01, rel=1e-14)
    batch = np.stack([path, path[::-1]])
    both = euclidean_action(batch, 0.5, GupParams(0.01, 0.0))
    assert both[0] == pytest.approx(np.conj(both[1]))
    with pytest.raises(DomainError):
        euclidean_action(path, -0.5, GupParams())


def _residual(v, tau, p):
    dq = v * tau
    exact = single_slice_propagator(0.0, dq, -1j * tau, p) / single_slice_propagator(
        0.0, dq, -1j * tau, GupParams())
    l1, l2 = slice_log_weight(v, tau, p)
    return exact - (1 + l1 + l2 + 0.5 * l1 * l1)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.3, 3), st.floats(0.1, 2.0))
def test_log_weight_residual_is_third_order(v, tau):
    # halving the couplings must shrink the residual by the next order
    ra, ra2 = _residual(v, tau, GupParams(1e-3, 0.0)), _residual(v, tau, GupParams(5e-4, 0.0))
    assert abs(ra2) <= abs(ra) / 8 * 1.05 + 1e-15
    rb, rb2 = _residual(v, tau, GupParams(0.0, 1e-4)), _residual(v, tau, GupParams(0.0, 5e-5))
    assert abs(rb2) <= abs(rb) / 4 * 1.05 + 1e-15


def test_free_quadrature_is_exact_slicing():
    b = Boundary.euclidean(0.1, 0.4, 0.9)
    p = GupParams(1e-4, 1e-6)
    one = sliced_kernel_quadrature(b, SliceConfig.for_boundary(b, 1, p), p).meta["ratio_to_undeformed"]
    for n in (2, 3):
        r = sliced_kernel_quadrature(b, SliceConfig.for_boundary(b, n, p), p).meta["ratio_to_undeformed"]
        assert abs(r - one) < 1e-8


def test_quadrature_undeformed_composes_free_kernels():
    b = Boundary.euclidean(0.1, 0.4, 0.9)
    kv = sliced_kernel_quadrature(b, SliceConfig.for_boundary(b, 3, GupParams()), GupParams())
    assert kv.amplitude == pytest.approx(free_kernel(b, GupParams()).amplitude, rel=1e-10)


def test_quadrature_rejects_undamped_quartic():
    b = Boundary.euclidean(0.0, 0.1, 1.0)
    p = GupParams(0.0, -0.1)
    with pytest.raises(StabilityError):
        sliced_kernel_quadrature(b, SliceConfig.for_boundary(b, 2, p), p)
    with pytest.raises(DomainError):
        sliced_kernel_quadrature(Boundary(0.0, 0.1, 1.0), SliceConfig(2, 0.5, 8.0), GupParams())


def test_slicing_converges_quadratically_on_oscillator():
    b = Boundary.euclidean(0.2, 0.5, 0.5, 1.0)
    tk = tilde_kernel(GupParams(), HermiteBasis(n_max=60), b).meta
    cont = tk["slope_beta"] / tk["undeformed"]

    def slope(n, h=1e-6):
        def r(be):
            pp = GupParams(0.0, be)
            return sliced_kernel_quadrature(b, SliceConfig.for_boundary(b, n, pp), pp,
                                            HO).meta["ratio_to_undeformed"]
        return (4 * r(h) - r(2 * h) - 3) / (2 * h)

    errs = [abs(slope(n) - cont) for n in (1, 2, 3)]
    for i in range(2):
        exponent = math.log(errs[i] / errs[i + 1]) / math.log((i + 2) / (i + 1))
        assert exponent == pytest.approx(2.0, abs=0.3)


def test_mc_trivial_and_determinism():
    b = Boundary.euclidean(0.1, 0.3, 1.0)
    cfg = SliceConfig.for_boundary(b, 16, GupParams())
    est = euclidean_mc_kernel(b, cfg, GupParams(), None, 2000, 1)
    assert est.mean == 1 and est.std_error == 0
    p = GupParams(0.0, 1e-4)
    x = euclidean_mc_kernel(b, cfg, p, None, 4000, 9)
    y = euclidean_mc_kernel(b, cfg, p, None, 4000, 9)
    z = euclidean_mc_kernel(b, cfg, p, None, 4000, 10)
    assert x.mean == y.mean and x.std_error == y.std_error and x.mean != z.mean


def test_mc_independent_of_thread_count(monkeypatch):
    b = Boundary.euclidean(0.1, 0.3, 1.0)
    p = GupParams(0.0, 1e-4)
    cfg = SliceConfig.for_boundary(b, 16, p)
    monkeypatch.setenv("GUP_THREADS", "1")
    one = euclidean_mc_kernel(b, cfg, p, None, 4000, 5)
    monkeypatch.setenv("GUP_THREADS", "3")
    three = euclidean_mc_kernel(b, cfg, p, None, 4000, 5)
    assert one.mean == three.mean and one.std_error == three.std_error


def test_mc_free_particle_matches_prediction():
    b = Boundary.euclidean(0.1, 0.3, 1.0)
    p = GupParams(1e-3, 1e-5)
    est = euclidean_mc_kernel(b, SliceConfig.for_boundary(b, 32, p), p, None, 40000, 2)
    pred = free_ratio_prediction(b, p)
    assert abs(est.mean - pred) <= 4 * est.std_error


def test_mc_oscillator_matches_spectral_kernel():
    b = Boundary.euclidean(0.1, 0.3, 1.0, 1.0)
    p = GupParams(0.0, 1e-4)
    sp = spectral_kernel(p, HermiteBasis(n_max=120), b).meta
    pred = 1 + p.beta * sp["slope_beta"] / sp["undeformed"]
    est = euclidean_mc_kernel(b, SliceConfig.for_boundary(b, 16, p), p, HO, 100000, 3)
    assert abs(est.mean - pred) <= 3 * est.std_error


def test_mc_guards():
    b = Boundary.euclidean(0.1, 0.3, 1.0)
    p = GupParams(0.0, 1e-2)
    with pytest.raises(StabilityError):
        euclidean_mc_kernel(b, SliceConfig.for_boundary(b, 64, p), p, None, 2000, 0)
    with pytest.raises(DomainError):
        euclidean_mc_kernel(Boundary(0.1, 0.3, 1.0), SliceConfig(4, 0.25, 8.0), GupParams(), None, 100)
    with pytest.raises(DomainError):
        euclidean_mc_kernel(b, SliceConfig.for_boundary(b, 4, p), p, None, 10)
