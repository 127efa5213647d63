"""Closed-form propagation kernels for the free particle and the oscillator.

Square roots of ``1/i`` use the principal branch, so for real ``T > 0`` the
prefactor carries the phase ``exp(-i pi/4)``. The same convention is used in
every module, which is what makes cross-route comparisons meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .classical.actions import ho_s0, ho_s_alpha, ho_s_beta_grouped, free_action
from .classical.boundary import Boundary
from .errors import DomainError
from .params import GupParams


@dataclass(frozen=True)
class KernelValue:
    """A complex kernel amplitude plus how it was obtained."""

    amplitude: complex
    method: str
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not np.isfinite(self.amplitude):
            raise DomainError("kernel amplitude is not finite")

    def to_dict(self) -> dict[str, Any]:
        a = complex(self.amplitude)
        return {"re": a.real, "im": a.imag, "method": self.method, "meta": _jsonable(self.meta)}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(np.real(x)), "im": float(np.imag(x))}
    if isinstance(x, np.generic):
        return x.item()
    return x


def sqrt_principal(z) -> complex:
    return complex(np.sqrt(complex(z)))


def _time_meta(b: Boundary) -> dict[str, Any]:
    return {"euclidean_tau": b.tau} if b.is_euclidean else {"T": b.T}


def free_fluctuation(b: Boundary, p: GupParams) -> complex:
    """``sqrt(m/(2 pi i hbar T))`` times the first-order fluctuation bracket.

    The bracket is ``1 + 3 a m dq/T + 3i b hbar m/T - 6i a^2 hbar m/T
    - 6 (a^2/2 + b) m^2 dq^2/T^2 + (45/2) a^2 m^2 dq^2/T^2``.
    """
    if b.omega != 0:
        raise DomainError("free_fluctuation needs omega == 0")
    m, hb, a, be, T, dq = p.mass, p.hbar, p.alpha, p.beta, b.T, b.dq
    bracket = (1 + 3 * a * m * dq / T + 3j * be * hb * m / T - 6j * a * a * hb * m / T
               - 6 * (a * a / 2 + be) * m * m * dq * dq / T**2
               + 22.5 * a * a * m * m * dq * dq / T**2)
    return sqrt_principal(m / (2j * np.pi * hb * T)) * complex(bracket)


def free_kernel(b: Boundary, p: GupParams) -> KernelValue:
    """``free_fluctuation * exp((i/hbar) S_free)`` with the full free action."""
    S = complex(free_action(b, p).total)
    amp = free_fluctuation(b, p) * np.exp(1j * S / p.hbar)
    return KernelValue(complex(amp), "semiclassical",
                       {"system": "free", "order": "alpha^2, beta", **_time_meta(b)})


def ho_prefactor(b: Boundary, p: GupParams) -> complex:
    """``sqrt(m w / (2 pi i hbar sin(w T)))`` on the principal branch."""
    return sqrt_principal(p.mass * b.omega / (2j * np.pi * p.hbar * np.sin(b.omega * b.T)))


def ho_fluctuation_f(b: Boundary, p: GupParams) -> complex:
    """``f = -(q0 - qf) m w csc^2(wT) [sin(wT) + sin(2wT)]``."""
    b.check_caustic()
    x = b.omega * b.T
    return complex(-(b.q0 - b.qf) * p.mass * b.omega / np.sin(x) ** 2
                   * (np.sin(x) + np.sin(2 * x)))


def ho_fluctuation_g(b: Boundary, p: GupParams) -> complex:
    """Quadratic-correction fluctuation function ``g``.

    A constant ``i hbar`` part and a part quadratic in the endpoints.
    """
    b.check_caustic()
    m, w, hb, q0, qf = p.mass, b.omega, p.hbar, b.q0, b.qf
    x = w * b.T
    s, c = np.sin(x), np.cos(x)
    const = 3j * hb * m * w / (8 * s**2) * (2 * x + 5 * s * c + x * np.cos(2 * x))
    pos = -3 * m * m * w * w / (8 * s**3) * (
        2 * x * (3 * c * (q0**2 + qf**2) - 2 * (2 + np.cos(2 * x)) * q0 * qf)
        + 10 * s * (q0**2 + qf**2 - 2 * q0 * qf * c)
        - 6 * s**3 * (q0**2 + qf**2))
    return complex(const + pos)


def ho_kernel_semiclassical(b: Boundary, p: GupParams) -> KernelValue:
    """Oscillator kernel to first order in alpha and beta.

    ``sqrt(m w/(2 pi i hbar sin wT)) [1 + alpha f + beta g] exp[(i/hbar)(S0 + S_alpha + S_beta)]``.
    Terms of order alpha**2 are not part of this form and are left out.
    """
    sin_abs = b.check_caustic()
    f = ho_fluctuation_f(b, p)
    g = ho_fluctuation_g(b, p)
    phase = ho_s0(b, p) + ho_s_alpha(b, p) + ho_s_beta_grouped(b, p)
    pref = ho_prefactor(b, p)
    base = pref * np.exp(1j * complex(ho_s0(b, p)) / p.hbar)
    amp = pref * (1 + p.alpha * f + p.beta * g) * np.exp(1j * complex(phase) / p.hbar)
    one = GupParams(1.0, 0.0, None, p.mass, p.hbar)
    slope_a = base * (f + 1j * complex(ho_s_alpha(b, one)) / p.hbar)
    slope_b = base * (g + 1j * complex(ho_s_beta_grouped(b, one.replace(alpha=0.0, beta=1.0)))
                      / p.hbar)
    meta = {"system": "ho", "order": "alpha, beta", "caustic_distance": float(sin_abs),
            "undeformed": complex(base), "slope_alpha": complex(slope_a),
            "slope_beta": complex(slope_b), **_time_meta(b)}
    return KernelValue(complex(amp), "semiclassical", meta)
