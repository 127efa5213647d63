"""Classical paths of the GUP Lagrangian.

The Lagrangian ``L = (m/2) v**2 (1 + 2 alpha m v + (8 alpha**2 - 2 beta) m**2 v**2) - V(q)``
gives the Euler-Lagrange equation

    m q'' (1 + 6 alpha m v + (48 alpha**2 - 12 beta) m**2 v**2) = -V'(q).

For the oscillator the path is built order by order,
``q = q_(0) + alpha q_(1) + alpha**2 q_(2) + beta q_(3)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import DomainError
from ..params import GupParams, max_free_velocity, validate_params
from .boundary import Boundary
from .trigseries import TrigSeries


def gup_lagrangian(qdot, q, p: GupParams, potential: Callable | None = None):
    """GUP Lagrangian ``(m/2) qdot**2 [1 + 2 a m qdot + (8 a**2 - 2 b) m**2 qdot**2] - V(q)``."""
    m, a, b = p.mass, p.alpha, p.beta
    qdot = np.asarray(qdot)
    kin = 0.5 * m * qdot**2 * (1 + 2 * a * m * qdot + (8 * a * a - 2 * b) * m * m * qdot**2)
    return kin - (potential(q) if potential is not None else 0.0)


def eom_factor(qdot, p: GupParams):
    """Bracket multiplying ``q''`` in the equation of motion."""
    m, a, b = p.mass, p.alpha, p.beta
    return 1 + 6 * a * m * qdot + (48 * a * a - 12 * b) * m * m * qdot**2


@dataclass(frozen=True)
class _Line:
    q0: float
    v: float

    def __call__(self, t, deriv: int = 0):
        t = np.asarray(t, dtype=float)
        if deriv == 0:
            return self.q0 + self.v * t
        return np.full_like(t, self.v if deriv == 1 else 0.0)


@dataclass(frozen=True)
class _Spline:
    spline: Callable

    def __call__(self, t, deriv: int = 0):
        return self.spline(np.asarray(t, dtype=float), deriv)


@dataclass(frozen=True)
class Trajectory:
    """A classical path on ``[0, T]``.

    ``pieces`` are callables ``piece(t, deriv)`` combined with ``weights``;
    for the perturbative oscillator the weights are ``(1, alpha, alpha**2, beta)``.
    """

    boundary: Boundary
    pieces: tuple
    weights: tuple[float, ...]
    kind: str
    grid: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def _combine(self, t, deriv):
        return sum(w * piece(t, deriv) for w, piece in zip(self.weights, self.pieces))

    def position(self, t):
        return self._combine(t, 0)

    def velocity(self, t):
        return self._combine(t, 1)

    def acceleration(self, t):
        return self._combine(t, 2)

    __call__ = position

    def piece(self, k: int, t, deriv: int = 0):
        """Unweighted piece ``q_(k)`` (or its derivatives) at ``t``."""
        return self.pieces[k](t, deriv)

    def sample(self, n: int = 201):
        """``(t, q, qdot)`` on ``n`` equally spaced times."""
        t = np.linspace(0.0, self.boundary.T, n)
        return t, self.position(t), self.velocity(t)

    def with_grid(self, n: int = 201) -> "Trajectory":
        return Trajectory(self.boundary, self.pieces, self.weights, self.kind,
                          self.sample(n), self.warnings)


def _speed_warning(b: Boundary, p: GupParams | None):
    if p is None or (p.alpha == 0 and p.beta == 0):
        return ()
    rep = validate_params(p)
    if not (rep.real_root and rep.nondegenerate):
        return ("velocity bound undefined for these parameters",)
    vmax = max_free_velocity(p)
    v = b.dq / b.T
    if vmax > 0 and abs(v) >= vmax:
        return (f"|v|={abs(v):.6g} exceeds the free-particle bound {vmax:.6g}",)
    return ()


def free_trajectory(b: Boundary, p: GupParams | None = None) -> Trajectory:
    """Straight line ``q0 + (qf - q0) t / T``.

    When ``p`` is supplied, a speed above the free-particle velocity bound is
    recorded in ``warnings``.
    """
    if b.omega != 0:
        raise DomainError("free_trajectory needs omega == 0")
    T = b.real_time()
    return Trajectory(b, (_Line(b.q0, b.dq / T),), (1.0,), "free",
                      warnings=_speed_warning(b, p))


@dataclass(frozen=True)
class HOTrajectoryCoefficients:
    """Integration constants of the perturbative oscillator path."""

    A: float
    B: float
    C1: float
    C2: float
    C3: float
    C4: float
    C5: float
    C6: float

    def as_dict(self):
        return {k: getattr(self, k) for k in ("A", "B", "C1", "C2", "C3", "C4", "C5", "C6")}


def _first_order(co, m, w):
    A, B = co["A"], co["B"]
    return (m * w * (A * A - B * B), 0, 2, "sin"), (-2 * A * B * m * w, 0, 2, "cos")


def _second_particular(co, m, w) -> TrigSeries:
    A, B, C1, C2 = co["A"], co["B"], co["C1"], co["C2"]
    K = m * m * w * w * (A * A + B * B)
    return TrigSeries(w, (
        (3 * K * A, 0, 1, "cos"),
        (-3 * K * B * w, 1, 1, "cos"),
        (-2 * m * w * (B * C1 + A * C2), 0, 2, "cos"),
        (-0.75 * m * m * w * w * A * (A * A - 3 * B * B), 0, 3, "cos"),
        (3 * K * A * w, 1, 1, "sin"),
        (2 * m * w * (A * C1 - B * C2), 0, 2, "sin"),
        (0.75 * m * m * w * w * B * (B * B - 3 * A * A), 0, 3, "sin"),
    ))


def _beta_particular(co, m, w) -> TrigSeries:
    A, B = co["A"], co["B"]
    K = m * m * w * w * (A * A + B * B)
    mw2 = m * m * w * w
    return TrigSeries(w, (
        (-6 * K * A / 8, 0, 1, "cos"),
        (12 * K * B * w / 8, 1, 1, "cos"),
        (-3 * mw2 * A * (A * A - 3 * B * B) / 8, 0, 3, "cos"),
        (-6 * K * B / 8, 0, 1, "sin"),
        (-12 * K * A * w / 8, 1, 1, "sin"),
        (3 * mw2 * B * (B * B - 3 * A * A) / 8, 0, 3, "sin"),
    ))


def ho_coefficients(b: Boundary, p: GupParams) -> HOTrajectoryCoefficients:
    """Constants ``A .. C6`` fixing the boundary values order by order.

    ``C4`` and ``C6`` are obtained from ``q_(2)(T) = q_(3)(T) = 0`` using the
    particular solutions, which is what the closed forms express.
    """
    T = b.real_time()
    b.check_caustic()
    m, w = p.mass, b.omega
    c, s = np.cos(w * T), np.sin(w * T)
    A = b.q0
    B = (b.qf - b.q0 * c) / s
    C1 = 2 * m * w * A * B
    C2 = (2 * A * B * m * w * np.cos(2 * w * T) - m * w * (A * A - B * B) * np.sin(2 * w * T)
          - 2 * m * w * A * B * c) / s
    C3 = -1.25 * m * m * w * w * A * B * B + 2 * m * w * A * C2 - 2.25 * m * m * w * w * A**3
    co = dict(A=A, B=B, C1=C1, C2=C2)
    C4 = -(C3 * c + float(_second_particular(co, m, w)(T))) / s
    C5 = 0.375 * m * m * w * w * (3 * A**3 - A * B * B)
    C6 = -(C5 * c + float(_beta_particular(co, m, w)(T))) / s
    return HOTrajectoryCoefficients(A, B, C1, C2, C3, C4, C5, C6)


def ho_trajectory(b: Boundary, p: GupParams) -> Trajectory:
    """Perturbative oscillator path ``q_(0) + alpha q_(1) + alpha**2 q_(2) + beta q_(3)``."""
    co = ho_coefficients(b, p).as_dict()
    m, w = p.mass, b.omega
    q0 = TrigSeries(w, ((co["A"], 0, 1, "cos"), (co["B"], 0, 1, "sin")))
    q1 = TrigSeries(w, ((co["C1"], 0, 1, "cos"), (co["C2"], 0, 1, "sin"))
                    + _first_order(co, m, w))
    q2 = TrigSeries(w, ((co["C3"], 0, 1, "cos"), (co["C4"], 0, 1, "sin"))) \
        + _second_particular(co, m, w)
    q3 = TrigSeries(w, ((co["C5"], 0, 1, "cos"), (co["C6"], 0, 1, "sin"))) \
        + _beta_particular(co, m, w)
    return Trajectory(b, (q0, q1, q2, q3), (1.0, p.alpha, p.alpha**2, p.beta),
                      "ho-perturbative")


def eom_residual(traj: Trajectory, p: GupParams) -> Callable:
    """``t -> q''(1 + 6 a m v + (48 a**2 - 12 b) m**2 v**2) + omega**2 q``.

    With ``omega = 0`` this is the free equation of motion.
    """
    w = traj.boundary.omega

    def residual(t):
        v = traj.velocity(t)
        return traj.acceleration(t) * eom_factor(v, p) + w * w * traj.position(t)

    return residual
