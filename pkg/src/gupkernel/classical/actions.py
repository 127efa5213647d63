"""Closed-form classical actions for the free particle and the oscillator.

All functions accept a Euclidean boundary (complex ``T``); the formulas are
analytic in ``T`` and numpy evaluates them at complex arguments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..params import GupParams
from .boundary import Boundary


@dataclass(frozen=True)
class ActionBreakdown:
    """Action split by order: ``s0 + s_alpha + s_alpha2 + s_beta``."""

    s0: complex
    s_alpha: complex
    s_alpha2: complex
    s_beta: complex

    @property
    def total(self):
        return self.s0 + self.s_alpha + self.s_alpha2 + self.s_beta

    def to_dict(self):
        def num(x):
            x = complex(x)
            return x.real if x.imag == 0 else [x.real, x.imag]
        return {"s0": num(self.s0), "s_alpha": num(self.s_alpha),
                "s_alpha2": num(self.s_alpha2), "s_beta": num(self.s_beta),
                "total": num(self.total)}


def free_action(b: Boundary, p: GupParams) -> ActionBreakdown:
    """``(m / 2T) dq**2 [1 + 2 a m v + 8 a**2 m**2 v**2 - 2 b m**2 v**2]`` with ``v = dq / T``."""
    if b.omega != 0:
        raise DomainError("free_action needs omega == 0")
    m, T = p.mass, b.T
    v = b.dq / T
    base = m / (2 * T) * b.dq**2
    return ActionBreakdown(base, base * 2 * p.alpha * m * v,
                           base * 8 * p.alpha**2 * m * m * v * v,
                           -base * 2 * p.beta * m * m * v * v)


def _ho_pieces(b: Boundary, p: GupParams):
    b.check_caustic()
    return b.q0, b.qf, b.omega * b.T, p.mass, b.omega


def ho_s0(b: Boundary, p: GupParams):
    q0, qf, x, m, w = _ho_pieces(b, p)
    return 0.5 * m * w / np.sin(x) * ((q0**2 + qf**2) * np.cos(x) - 2 * q0 * qf)


def ho_s_alpha(b: Boundary, p: GupParams):
    q0, qf, x, m, w = _ho_pieces(b, p)
    bracket = ((q0**2 + q0 * qf + qf**2) * np.cos(2 * x) - 12 * q0 * qf * np.cos(x)
               - q0 * qf + 5 * (q0**2 + qf**2))
    return -p.alpha / 6 * m**2 * w**2 * (q0 - qf) / np.sin(x) ** 2 * bracket


def ho_s_alpha2(b: Boundary, p: GupParams):
    q0, qf, x, m, w = _ho_pieces(b, p)
    s, c = np.sin, np.cos
    bracket = ((q0**4 + qf**4) * s(4 * x)
               - 4 * q0 * qf * (21 * q0**2 - 20 * q0 * qf + 21 * qf**2) * s(x)
               - 4 * q0 * qf * (5 * q0**2 - 4 * q0 * qf + 5 * qf**2) * s(3 * x)
               + 24 * q0**2 * qf**2 * x * c(2 * x)
               - 48 * q0 * qf * x * (q0**2 + qf**2) * c(x)
               + 12 * x * (q0**4 + 4 * q0**2 * qf**2 + qf**4)
               + 4 * (6 * q0**4 - 8 * q0**3 * qf + 23 * q0**2 * qf**2
                      - 8 * q0 * qf**3 + 6 * qf**4) * s(2 * x))
    return p.alpha**2 / 16 * m**3 * w**3 / s(x) ** 4 * bracket


def ho_s_beta(b: Boundary, p: GupParams):
    """Quadratic-correction action in the form derived alongside the trajectory."""
    q0, qf, x, m, w = _ho_pieces(b, p)
    s, c = np.sin, np.cos
    bracket = ((q0**4 + qf**4) * s(4 * x)
               - 44 * q0 * qf * (q0**2 + qf**2) * s(x)
               - 12 * q0 * qf * (q0**2 + qf**2) * s(3 * x)
               + 24 * q0**2 * qf**2 * x * c(2 * x)
               - 48 * q0 * qf * x * (q0**2 + qf**2) * c(x)
               + 12 * x * (q0**4 + 4 * q0**2 * qf**2 + qf**4)
               + 4 * (2 * q0**4 + 15 * q0**2 * qf**2 + 2 * qf**4) * s(2 * x))
    return -p.beta / 32 * m**3 * w**3 / s(x) ** 4 * bracket


def ho_s_beta_grouped(b: Boundary, p: GupParams):
    """The same quadratic-correction action regrouped by powers of the endpoints.

    This is the arrangement used alongside the spectral kernel; it must agree
    with :func:`ho_s_beta` identically.
    """
    q0, qf, x, m, w = _ho_pieces(b, p)
    s, c = np.sin, np.cos
    bracket = ((12 * x + 8 * s(2 * x) + s(4 * x)) * (q0**4 + qf**4)
               - 4 * (12 * x * c(x) + 11 * s(x) + 3 * s(3 * x)) * q0 * qf * (q0**2 + qf**2)
               + 12 * (4 * x + 2 * x * c(2 * x) + 5 * s(2 * x)) * q0**2 * qf**2)
    return -p.beta * m**3 * w**3 / 32 / s(x) ** 4 * bracket


def ho_action(b: Boundary, p: GupParams) -> ActionBreakdown:
    """Oscillator action to second order in alpha and first order in beta.

    Raises
    ------
    CausticError
        If ``|sin(omega T)|`` is below the caustic tolerance.
    """
    return ActionBreakdown(ho_s0(b, p), ho_s_alpha(b, p), ho_s_alpha2(b, p),
                           ho_s_beta(b, p))
