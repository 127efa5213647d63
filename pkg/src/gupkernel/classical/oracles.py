"""Numerical oracles for the closed forms: shooting and action quadrature."""
from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from ..errors import NoConvergenceError, NumericError, SingularDynamicsError
from ..numerics import gauss_rule, rk4_integrate
from ..params import GupParams
from .boundary import Boundary, potential_for, potential_gradient
from .trajectories import Trajectory, _Spline, eom_factor, gup_lagrangian

RK4_STEPS = 2000
SHOOT_ITERATIONS = 50
SHOOT_FAN = 33  # candidates per refinement pass: 32 subintervals = 5 halvings
_SINGULAR_FLOOR = 1e-3


def _shoot_many(b: Boundary, p: GupParams, potential, v0s, steps: int):
    """Integrate a batch of initial velocities; returns (ts, ys, singular_mask)."""
    m = p.mass
    v0s = np.asarray(v0s, dtype=float)
    bad = np.zeros(v0s.shape, dtype=bool)

    def rhs(t, y):
        q, v = y
        k = eom_factor(v, p)
        low = k < _SINGULAR_FLOOR
        bad[low] = True
        k = np.where(low | bad, 1.0, k)
        return np.stack([v, -potential_gradient(potential, q) / (m * k)])

    y0 = np.stack([np.full_like(v0s, b.q0), v0s])
    ts, ys = rk4_integrate(rhs, y0, 0.0, b.T, steps)
    return ts, ys, bad


def _initial_velocity(b: Boundary) -> float:
    T, w = b.T, b.omega
    if w and abs(np.sin(w * T)) > 1e-6:
        return w * (b.qf - b.q0 * np.cos(w * T)) / np.sin(w * T)
    return b.dq / T


def _first_sign_change(vs, miss, ok, centre):
    """Adjacent valid candidates with opposite signs, nearest to ``centre``."""
    best = None
    for k in range(len(vs) - 1):
        if not (ok[k] and ok[k + 1]):
            continue
        if miss[k] == 0:
            return vs[k], vs[k]
        if np.sign(miss[k]) != np.sign(miss[k + 1]):
            d = min(abs(vs[k] - centre), abs(vs[k + 1] - centre))
            if best is None or d < best[0]:
                best = (d, vs[k], vs[k + 1])
    return None if best is None else best[1:]


def bvp_shoot(b: Boundary, p: GupParams, potential=None, steps: int = RK4_STEPS,
              max_iter: int = SHOOT_ITERATIONS) -> Trajectory:
    """Solve the exact Euler-Lagrange boundary problem by shooting.

    The initial velocity is bracketed around the undeformed solution, then
    the bracket is narrowed by multisection: each pass integrates
    ``SHOOT_FAN`` evenly spaced velocities as one RK4 batch and keeps the
    subinterval with a sign change. The passes add up to ``max_iter``
    bisection halvings.

    Raises
    ------
    NoConvergenceError
        If no bracket is found or the endpoint misses ``qf`` by more than
        ``1e-10 max(1, |qf|)``.
    SingularDynamicsError
        If the kinetic factor of the equation of motion approaches zero.
    """
    b.real_time()
    potential = potential_for(b, p.mass) if potential is None else potential
    tol = 1e-10 * max(1.0, abs(b.qf))
    guess = _initial_velocity(b)

    widths = 0.05 * (1 + abs(guess)) * 2.0 ** np.arange(20)
    vs = np.concatenate([guess - widths[::-1], [guess], guess + widths])
    _, ys, bad = _shoot_many(b, p, potential, vs, steps)
    bracket = _first_sign_change(vs, ys[-1, 0] - b.qf, ~bad, guess)
    if bracket is None:
        if bad.any():
            raise SingularDynamicsError("kinetic factor vanished for every bracketing velocity")
        raise NoConvergenceError("could not bracket the initial velocity")
    lo, hi = bracket

    halvings = 0
    per_pass = int(np.log2(SHOOT_FAN - 1))
    while halvings < max_iter and hi > lo:
        vs = np.linspace(lo, hi, SHOOT_FAN)
        _, ys, bad = _shoot_many(b, p, potential, vs, steps)
        miss = ys[-1, 0] - b.qf
        if bad.any():
            raise SingularDynamicsError("kinetic factor vanished inside the bracket")
        k = int(np.argmin(np.abs(miss)))
        if abs(miss[k]) < tol * 1e-3:
            lo = hi = vs[k]
            break
        bracket = _first_sign_change(vs, miss, np.ones_like(bad), 0.5 * (lo + hi))
        if bracket is None:
            raise NoConvergenceError("lost the sign change while refining")
        lo, hi = bracket
        halvings += per_pass
    v0 = 0.5 * (lo + hi)
    ts, ys, bad = _shoot_many(b, p, potential, np.array([v0]), steps)
    q, v = ys[:, 0, 0], ys[:, 1, 0]
    if bad.any():
        raise SingularDynamicsError("kinetic factor vanished along the solution")
    if abs(q[-1] - b.qf) >= tol:
        raise NoConvergenceError(f"endpoint misses qf by {abs(q[-1] - b.qf):.3g}")
    spline = CubicHermiteSpline(ts, q, v)

    def evaluate(t, deriv=0):
        return spline(t, deriv)

    return Trajectory(b, (_Spline(evaluate),), (1.0,), "shooting", grid=(ts, q, v))


def action_quadrature(traj: Trajectory, p: GupParams, potential=None,
                      rtol: float = 1e-12) -> float:
    """Gauss-Legendre integral of the GUP Lagrangian along ``traj``.

    The rule order doubles from 16 until successive estimates agree to
    ``rtol`` relative (or 256 nodes are reached).
    """
    b = traj.boundary
    T = b.real_time()
    potential = potential_for(b, p.mass) if potential is None else potential

    def lagr(t):
        return gup_lagrangian(traj.velocity(t), traj.position(t), p, potential)

    order = 16
    prev = gauss_rule("legendre", order).integrate(lagr, 0.0, T)
    while order < 256:
        order *= 2
        cur = gauss_rule("legendre", order).integrate(lagr, 0.0, T)
        if not np.isfinite(cur):
            raise NumericError("non-finite action estimate")
        if abs(cur - prev) <= rtol * max(abs(cur), 1e-300) or abs(cur - prev) < 1e-15:
            return float(cur)
        prev = cur
    return float(prev)
