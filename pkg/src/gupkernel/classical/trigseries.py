"""Sums of ``c * t**k * cos(j w t)`` and ``c * t**k * sin(j w t)`` with k in {0, 1}.

Every perturbative oscillator piece is of this form, so derivatives are
exact rather than finite differences.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TrigSeries:
    omega: float
    terms: tuple[tuple[float, int, int, str], ...]  # (coef, k, j, "cos"|"sin")

    def __add__(self, other: "TrigSeries") -> "TrigSeries":
        return TrigSeries(self.omega, self.terms + other.terms)

    def __call__(self, t, deriv: int = 0):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c, k, j, kind in self.terms:
            if c == 0:
                continue
            w = j * self.omega
            cs, sn = np.cos(w * t), np.sin(w * t)
            tk = t if k else 1.0
            # write the factor as C(w t) with dC/dt = -w S; for sin, S = -cos
            if kind == "sin":
                cs, sn = sn, -cs
            if deriv == 0:
                val = tk * cs
            elif deriv == 1:
                val = k * cs - w * tk * sn
            elif deriv == 2:
                val = -2 * k * w * sn - w * w * tk * cs
            else:
                raise ValueError("deriv must be 0, 1 or 2")
            out = out + c * val
        return out
