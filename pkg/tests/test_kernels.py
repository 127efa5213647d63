import cmath
import math

import numpy as np
import pytest

from gupkernel.classical import Boundary
from gupkernel.errors import CausticError
from gupkernel.kernels import (free_fluctuation, free_kernel, ho_fluctuation_f,
                               ho_fluctuation_g, ho_kernel_semiclassical)
from gupkernel.lattice import single_slice_propagator
from gupkernel.params import GupParams


def textbook_free(b, m=1.0, hb=1.0):
    T = b.T
    return cmath.sqrt(m / (2j * math.pi * hb * T)) * cmath.exp(1j * m * b.dq**2 / (2 * hb * T))


def textbook_ho(b, m=1.0, hb=1.0):
    w, T, q0, qf = b.omega, b.T, b.q0, b.qf
    s = cmath.sin(w * T)
    S = m * w / (2 * s) * ((q0**2 + qf**2) * cmath.cos(w * T) - 2 * q0 * qf)
    return cmath.sqrt(m * w / (2j * math.pi * hb * s)) * cmath.exp(1j * S / hb)


def test_free_prefactor_branch():
    b = Boundary(0.0, 1.0, 2.0)
    assert free_fluctuation(b, GupParams()) == pytest.approx(
        math.sqrt(1 / (4 * math.pi)) * cmath.exp(-1j * math.pi / 4), rel=1e-15)


def test_free_bracket_example():
    b = Boundary(0.0, 1.0, 1.0)
    got = free_fluctuation(b, GupParams(0.01, 0.001)) / free_fluctuation(b, GupParams())
    # 1 + 3a + 3ib - 6ia^2 - 6(a^2/2 + b) + 45/2 a^2
    assert got == pytest.approx(1 + 0.03 + 0.003j - 0.0006j - 0.0063 + 0.00225, abs=1e-15)


def test_free_bracket_at_coincident_points():
    b = Boundary(0.4, 0.4, 0.7)
    p = GupParams(0.01, 0.001)
    got = free_fluctuation(b, p) / free_fluctuation(b, GupParams())
    assert got == pytest.approx(1 + 1j * (3 * 0.001 - 6e-4) / 0.7, abs=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_textbook_limits(seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        q0, qf = rng.uniform(-2, 2, 2)
        T = rng.uniform(0.1, 3.0)
        w = rng.uniform(0.2, 2.0)
        bf = Boundary(q0, qf, T)
        assert free_kernel(bf, GupParams()).amplitude == pytest.approx(textbook_free(bf), rel=1e-12)
        bh = Boundary(q0, qf, T, w)
        if abs(math.sin(w * T)) < 0.05:
            continue
        assert ho_kernel_semiclassical(bh, GupParams()).amplitude == pytest.approx(
            textbook_ho(bh), rel=1e-12)


def test_beta_only_free_kernel():
    b = Boundary(0.2, 0.9, 1.3)
    be = 1e-3
    got = free_kernel(b, GupParams(0.0, be)).amplitude / textbook_free(b)
    dq, T = b.dq, b.T
    bracket = 1 + 3j * be / T - 6 * be * dq**2 / T**2
    phase = cmath.exp(-1j * be * dq**4 / T**3)
    assert got == pytest.approx(bracket * phase, rel=1e-14)


def test_free_kernel_matches_single_slice_in_euclidean_time():
    b = Boundary.euclidean(0.1, 0.4, 0.3)
    p = GupParams(1e-4, 1e-6)
    k = free_kernel(b, p).amplitude
    s = single_slice_propagator(b.q0, b.qf, b.T, p)
    assert abs(k - s) / abs(s) < 1e-9


def test_f_examples():
    p = GupParams()
    assert ho_fluctuation_f(Boundary(0.5, 0.5, 1.0, 1.0), p) == 0
    f = ho_fluctuation_f(Boundary(0.2, 0.9, math.pi / 2, 1.0), p)
    assert f == pytest.approx(0.7, abs=1e-14)
    assert ho_fluctuation_f(Boundary(0.9, 0.2, 1.1, 1.0), p) == pytest.approx(
        -ho_fluctuation_f(Boundary(0.2, 0.9, 1.1, 1.0), p), rel=1e-15)


def test_g_examples():
    p = GupParams()
    x = 1.2
    want = 3j / (8 * math.sin(x) ** 2) * (2 * x + 5 * math.sin(x) * math.cos(x) + x * math.cos(2 * x))
    assert ho_fluctuation_g(Boundary(0.0, 0.0, x, 1.0), p) == pytest.approx(want, rel=1e-15)


def test_g_position_part_is_quadratic():
    p = GupParams()
    c = ho_fluctuation_g(Boundary(0.0, 0.0, 1.2, 1.0), p)
    g1 = ho_fluctuation_g(Boundary(0.3, -0.5, 1.2, 1.0), p) - c
    g2 = ho_fluctuation_g(Boundary(0.6, -1.0, 1.2, 1.0), p) - c
    assert g2 == pytest.approx(4 * g1, rel=1e-13)


def test_ho_kernel_free_limit_and_euclidean_value():
    b = Boundary(0.3, 0.8, 1.0, 1e-4)
    ho = ho_kernel_semiclassical(b, GupParams()).amplitude
    fr = free_kernel(Boundary(0.3, 0.8, 1.0), GupParams()).amplitude
    assert abs(ho - fr) / abs(fr) < 1e-6
    e = ho_kernel_semiclassical(Boundary.euclidean(0, 0, 1.0, 1.0), GupParams()).amplitude
    assert e == pytest.approx(math.sqrt(1 / (2 * math.pi * math.sinh(1.0))), rel=1e-14)


def _one_sided(fn, h):
    return (-3 * fn(0.0) + 4 * fn(h) - fn(2 * h)) / (2 * h)


@pytest.mark.parametrize("T", [1.1, -0.8j])
def test_first_order_slopes_by_finite_difference(T):
    b = Boundary(0.3, -0.4, T, 1.0)
    kv = ho_kernel_semiclassical(b, GupParams())
    da = _one_sided(lambda a: ho_kernel_semiclassical(b, GupParams(a, 0.0)).amplitude, 1e-6)
    db = (ho_kernel_semiclassical(b, GupParams(0.0, 1e-6)).amplitude
          - ho_kernel_semiclassical(b, GupParams(0.0, -1e-6)).amplitude) / 2e-6
    assert abs(da - kv.meta["slope_alpha"]) <= 1e-5 * abs(kv.meta["slope_alpha"])
    assert abs(db - kv.meta["slope_beta"]) <= 1e-5 * abs(kv.meta["slope_beta"])


def test_ho_kernel_caustic():
    with pytest.raises(CausticError):
        ho_kernel_semiclassical(Boundary(0.1, 0.2, math.pi, 1.0), GupParams())


def test_kernel_value_to_dict():
    d = free_kernel(Boundary(0.0, 1.0, 1.0), GupParams()).to_dict()
    assert set(d) == {"re", "im", "method", "meta"} and d["method"] == "semiclassical"
