import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gupkernel.classical import (Boundary, HarmonicPotential, action_quadrature, bvp_shoot,
                                 eom_residual, free_action, free_trajectory, gup_lagrangian,
                                 ho_action, ho_coefficients, ho_s0, ho_s_beta,
                                 ho_s_beta_grouped, ho_trajectory)
from gupkernel.errors import CausticError, DomainError, SingularDynamicsError
from gupkernel.params import GupParams

HO = HarmonicPotential(1.0, 1.0)


def test_lagrangian_examples():
    assert gup_lagrangian(1.0, 0.0, GupParams()) == pytest.approx(0.5)
    assert gup_lagrangian(1.0, 0.0, GupParams(0.01, 0.001)) == pytest.approx(0.5094, abs=1e-15)
    assert gup_lagrangian(0.0, 2.0, GupParams(), lambda q: q * q) == pytest.approx(-4.0)


def test_free_trajectory():
    line = free_trajectory(Boundary(0.0, 1.0, 1.0))
    assert line.position(0.5) == pytest.approx(0.5)
    flat = free_trajectory(Boundary(0.4, 0.4, 2.0))
    assert np.allclose(flat.position(np.linspace(0, 2, 7)), 0.4)
    fast = free_trajectory(Boundary(0.0, 50.0, 1.0), GupParams(0.01, 0.001))
    assert fast.warnings and "exceeds" in fast.warnings[0]
    assert not free_trajectory(Boundary(0.0, 5.0, 1.0), GupParams(0.01, 0.001)).warnings


def test_free_action_examples():
    b = Boundary(0.0, 1.0, 1.0)
    assert free_action(b, GupParams()).total == pytest.approx(0.5)
    p = GupParams(0.01, 0.001)
    assert free_action(b, p).total == pytest.approx(0.5094, abs=1e-15)
    assert action_quadrature(free_trajectory(b), p) == pytest.approx(0.5094, abs=1e-12)


def test_ho_action_free_limit():
    p = GupParams(0.01, 0.002)
    ho = ho_action(Boundary(0.3, 0.7, 2.0, 1e-4), p).total
    fr = free_action(Boundary(0.3, 0.7, 2.0), p).total
    assert abs(ho - fr) / abs(fr) < 1e-6


def test_ho_coefficient_examples():
    c = ho_coefficients(Boundary(0.0, 1.0, math.pi / 2, 1.0), GupParams())
    assert c.A == 0 and c.B == pytest.approx(1.0)
    c = ho_coefficients(Boundary(1.0, 1.0, math.pi / 2, 1.0), GupParams(0.01, 0.001))
    assert (c.A, c.B, c.C1) == pytest.approx((1.0, 1.0, 2.0))


@settings(max_examples=60, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3.0), st.floats(0.2, 2.0),
       st.floats(0, 0.05), st.floats(0, 0.01))
def test_boundary_reconstruction(q0, qf, T, w, a, b):
    bd = Boundary(q0, qf, T, w)
    if abs(math.sin(w * T)) < 1e-3:
        return
    traj = ho_trajectory(bd, GupParams(a, b))
    scale = max(1.0, abs(q0), abs(qf))
    assert abs(traj.position(0.0) - q0) <= 1e-12 * scale
    assert abs(traj.position(T) - qf) <= 1e-12 * scale


def test_undeformed_ho_path():
    bd = Boundary(0.3, 0.8, 1.0, 1.0)
    traj = ho_trajectory(bd, GupParams())
    t = np.linspace(0, 1, 11)
    B = (0.8 - 0.3 * math.cos(1.0)) / math.sin(1.0)
    assert np.allclose(traj.position(t), 0.3 * np.cos(t) + B * np.sin(t), atol=1e-14)
    assert np.max(np.abs(eom_residual(traj, GupParams())(t))) <= 1e-12


def test_ho_path_tends_to_line():
    p = GupParams(0.01, 0.002)
    t = np.linspace(0, 1, 21)
    ho = ho_trajectory(Boundary(0.3, 0.8, 1.0, 1e-4), p).position(t)
    line = free_trajectory(Boundary(0.3, 0.8, 1.0)).position(t)
    assert np.max(np.abs(ho - line)) / np.max(np.abs(line)) < 1e-6


def test_straight_line_solves_free_eom_exactly():
    traj = free_trajectory(Boundary(0.0, 3.0, 2.0))
    res = eom_residual(traj, GupParams(0.01, 0.001))(np.linspace(0, 2, 9))
    assert np.all(res == 0)


def test_perturbative_residual_is_small():
    p = GupParams(1e-3, 5e-6)
    traj = ho_trajectory(Boundary(0.3, 0.8, 1.0, 1.0), p)
    res = np.max(np.abs(eom_residual(traj, p)(np.linspace(0, 1, 201))))
    assert res < p.alpha**2


def test_ho_action_examples():
    assert ho_action(Boundary(0.0, 0.0, 1.3, 1.0), GupParams()).s0 == 0
    assert abs(ho_action(Boundary(0.0, 1.0, math.pi / 2, 1.0), GupParams()).s0) < 1e-16
    ab = ho_action(Boundary(0.3, 0.8, 1.0, 1.0), GupParams(0.01, 0.001))
    assert ab.total == ab.s0 + ab.s_alpha + ab.s_alpha2 + ab.s_beta


def test_ho_action_against_quadrature():
    p = GupParams(1e-3, 5e-6)
    bd = Boundary(0.3, 0.8, 1.0, 1.0)
    closed = ho_action(bd, p).total
    quad = action_quadrature(ho_trajectory(bd, p), p)
    assert abs(closed - quad) < p.alpha**2


def test_quadrature_oracle_examples():
    bd = Boundary(0.2, 1.1, 1.5)
    assert action_quadrature(free_trajectory(bd), GupParams()) == pytest.approx(0.9**2 / 3, abs=1e-14)
    ho = Boundary(0.3, 0.8, 1.0, 1.0)
    pure = ho_trajectory(ho, GupParams())
    assert action_quadrature(pure, GupParams()) == pytest.approx(ho_s0(ho, GupParams()), abs=1e-10)


def test_shooting_oracle():
    ho = Boundary(0.3, 0.8, 1.0, 1.0)
    t = np.linspace(0, 1, 41)
    exact = ho_trajectory(ho, GupParams()).position(t)
    assert np.max(np.abs(bvp_shoot(ho, GupParams(), HO).position(t) - exact)) < 1e-9
    line = free_trajectory(Boundary(0.3, 0.8, 1.0)).position(t)
    assert np.max(np.abs(bvp_shoot(Boundary(0.3, 0.8, 1.0), GupParams()).position(t) - line)) < 1e-9
    p = GupParams(1e-3, 5e-6)
    diff = np.max(np.abs(bvp_shoot(ho, p, HO).position(t) - ho_trajectory(ho, p).position(t)))
    assert diff < p.alpha**2


def test_shooting_beyond_velocity_bound():
    with pytest.raises(SingularDynamicsError):
        bvp_shoot(Boundary(0.0, 45.0, 1.0), GupParams(0.01, 0.001))


def test_caustics_rejected():
    with pytest.raises(CausticError):
        ho_action(Boundary(0.1, 0.2, math.pi, 1.0), GupParams())
    with pytest.raises(DomainError):
        Boundary(0.0, 1.0, -1.0)


def test_beta_action_forms_agree():
    rng = np.random.default_rng(11)
    for _ in range(20):
        q0, qf = rng.uniform(-1, 1, 2)
        T, w = rng.uniform(0.2, 2.5), rng.uniform(0.3, 2.0)
        if abs(math.sin(w * T)) < 0.05:
            continue
        bd, p = Boundary(q0, qf, T, w), GupParams(0.0, 1.0, None, rng.uniform(0.5, 2))
        x, y = ho_s_beta(bd, p), ho_s_beta_grouped(bd, p)
        assert abs(x - y) <= 1e-12 * max(1.0, abs(x))
