"""Spectral-sum kernels and their closed-form tilde factors."""
from __future__ import annotations

import math

import numpy as np

from ..classical.actions import ho_s0
from ..classical.boundary import Boundary
from ..errors import ConvergenceError, DomainError
from ..kernels import KernelValue, ho_prefactor
from ..params import GupParams
from .hermite import HermiteBasis
from .perturbation import energy_beta_slope


def _check_time(time: complex):
    time = complex(time)
    if not time.imag < 0:
        raise ConvergenceError("spectral sums need damped time (Im T < 0); use T = -i tau")
    return time


def spectral_pieces(basis: HermiteBasis, q0: float, qf: float, time: complex, N: int):
    """The sums ``J, dJ/dbeta, M1, M2, N1, N2`` over ``n = 0..N``.

    ``J`` is the undeformed kernel; ``dJ/dbeta`` the first-order effect of
    the level shift.
    """
    if N > basis.n_max - 4:
        raise DomainError(f"N={N} exceeds n_max-4={basis.n_max - 4}")
    time = _check_time(time)
    P0 = basis.table(q0, N + 4)
    Pf = basis.table(qf, N + 4)
    w, hb = basis.omega, basis.hbar
    n = np.arange(N + 1)
    e = np.exp(-1j * (n + 0.5) * w * time)
    J = np.sum(Pf[n] * P0[n] * e)
    dE = np.array([energy_beta_slope(basis, k) for k in n])
    dJ = np.sum(Pf[n] * P0[n] * e * (-1j * time / hb) * dE)

    def shifted(k):
        ok = (n + k >= 0)
        idx = np.where(ok, n + k, 0)
        return ok, idx

    M1 = M2 = N1 = N2 = 0j
    nf = n.astype(float)
    ok, i3 = shifted(-3)
    M1 += np.sum(np.where(ok, np.sqrt(nf * (nf - 1) * (nf - 2)) / 3
                          * (Pf[n] * P0[i3] - P0[n] * Pf[i3]), 0) * e)
    M1 += np.sum(np.sqrt((nf + 1) * (nf + 2) * (nf + 3)) / 3
                 * (P0[n + 3] * Pf[n] - Pf[n + 3] * P0[n]) * e)
    ok, i1 = shifted(-1)
    M2 += -3 * np.sum(np.where(ok, nf * np.sqrt(nf) * (Pf[n] * P0[i1] - Pf[i1] * P0[n]), 0) * e)
    M2 += -3 * np.sum((nf + 1) * np.sqrt(nf + 1) * (Pf[n] * P0[n + 1] - Pf[n + 1] * P0[n]) * e)
    N1 += np.sum((2 * nf + 3) * np.sqrt((nf + 1) * (nf + 2)) / 4
                 * (Pf[n] * P0[n + 2] + P0[n] * Pf[n + 2]) * e)
    ok, i2 = shifted(-2)
    N1 -= np.sum(np.where(ok, (2 * nf - 1) * np.sqrt(np.maximum(nf * (nf - 1), 0)) / 4
                          * (Pf[n] * P0[i2] + P0[n] * Pf[i2]), 0) * e)
    ok, i4 = shifted(-4)
    N2 += np.sum(np.where(ok, np.sqrt(np.maximum(nf * (nf - 1) * (nf - 2) * (nf - 3), 0)) / 16
                          * (Pf[n] * P0[i4] + P0[n] * Pf[i4]), 0) * e)
    N2 -= np.sum(np.sqrt((nf + 1) * (nf + 2) * (nf + 3) * (nf + 4)) / 16
                 * (Pf[n] * P0[n + 4] + P0[n] * Pf[n + 4]) * e)
    tail = abs(Pf[N] * P0[N] * e[N])
    return {"J": complex(J), "dJ_dbeta": complex(dJ), "M1": complex(M1), "M2": complex(M2),
            "N1": complex(N1), "N2": complex(N2), "tail": float(tail)}


def alpha_coupling(basis: HermiteBasis) -> float:
    """``(1/(m w hbar)) (m w hbar / 2)^{3/2}``; the alpha slope is ``i`` times this."""
    mwh = basis.mass * basis.omega * basis.hbar
    return (mwh / 2) ** 1.5 / mwh


def spectral_kernel(p: GupParams, basis: HermiteBasis, b: Boundary, time: complex | None = None,
                    N: int | None = None) -> KernelValue:
    """Truncated eigenfunction expansion of the oscillator kernel to first order.

    ``J + i alpha c (M1 + M2) + beta (dJ/dbeta + m hbar w (N1 + N2))`` with
    ``c = (m w hbar/2)^{3/2} / (m w hbar)``. Only damped (Euclidean) times are
    accepted because the real-time sum does not converge absolutely.
    """
    if b.omega and abs(b.omega - basis.omega) > 1e-12 * basis.omega:
        raise DomainError("boundary omega differs from the basis omega")
    if abs(p.mass - basis.mass) > 1e-12 * basis.mass or abs(p.hbar - basis.hbar) > 1e-12 * basis.hbar:
        raise DomainError("parameter mass/hbar differ from the basis")
    time = b.T if time is None else time
    N = basis.n_max - 4 if N is None else N
    pc = spectral_pieces(basis, b.q0, b.qf, time, N)
    mwh = basis.mass * basis.omega * basis.hbar
    slope_a = 1j * alpha_coupling(basis) * (pc["M1"] + pc["M2"])
    slope_b = pc["dJ_dbeta"] + mwh * (pc["N1"] + pc["N2"])
    amp = pc["J"] + p.alpha * slope_a + p.beta * slope_b
    meta = {"N": N, "tail_estimate": pc["tail"], "order": "alpha, beta",
            "undeformed": pc["J"], "slope_alpha": complex(slope_a),
            "slope_beta": complex(slope_b), "time": complex(time)}
    return KernelValue(complex(amp), "spectral", meta)


def tilde_factors(p: GupParams, basis: HermiteBasis, b: Boundary, T: complex | None = None):
    """Closed forms of ``J~, M~1, M~2, N~1, N~2``.

    ``J~`` includes its beta term; the other four are coupling-free and are
    multiplied by the couplings when the kernel is assembled. The overall
    sign of ``M~1`` is fixed by its eigenfunction sum.
    """
    T = b.T if T is None else T
    m, w, hb = basis.mass, basis.omega, basis.hbar
    q0, qf = b.q0, b.qf
    Boundary(q0, qf, T, w).check_caustic()
    x = w * T
    s, c = np.sin, np.cos
    Jt = 1 - (3j * p.beta * m * w**2 * T / (8 * hb * s(x) ** 4)) * (
        -3j * hb * m * w * (q0**2 + qf**2) * s(2 * x)
        + m**2 * w**2 * (q0**2 + qf**2 - 2 * q0 * qf * c(x)) ** 2
        + 4j * hb * m * w * s(x) * (2 + c(2 * x)) * q0 * qf
        - hb**2 * s(x) ** 2 * (2 + c(2 * x)))
    M1 = -(1 / 3) * math.sqrt(m * w / (2 * hb)) * s(1.5 * x) / (hb * s(x) ** 2 * s(x / 2)) \
        * (q0 - qf) * (-m * w * (q0**2 + 4 * q0 * qf + qf**2)
                       + 2 * m * w * (q0**2 + q0 * qf + qf**2) * c(x) - 3j * hb * s(x))
    M2 = -(3 * math.sqrt(2) / (8 * hb)) * math.sqrt(m * w / hb) * (q0 - qf) \
        / (s(x / 2) ** 2 * c(x / 2) ** 2) \
        * (-1j * hb * s(2 * x) + m * w * (q0**2 - 2 * q0 * qf * c(x) + qf**2) - 1j * hb * s(x))
    N1 = -(1j / (8 * hb**2 * s(x) ** 3)) * (
        -4 * m**2 * w**2 * q0 * qf * (q0**2 + qf**2) * (3 + c(2 * x))
        + 3 * hb**2 * (c(3 * x) - c(x))
        + 4 * m * w * c(x) * (m * w * (q0**4 + 6 * q0**2 * qf**2 + qf**4)
                              + 12j * hb * q0 * qf * s(x))
        - 3j * hb * m * w * (q0**2 + qf**2) * (5 * s(x) + s(3 * x)))
    N2 = -(1j * c(x) / (16 * hb**2 * s(x) ** 3)) * (
        12 * m**2 * w**2 * q0**2 * qf**2 - 3 * hb**2 * (1 - c(2 * x))
        + 2 * m * w * (m * w * c(2 * x) * (q0**4 + qf**4)
                       - 4 * m * w * q0 * qf * (q0**2 + qf**2) * c(x)
                       - 6j * hb * s(x) * ((q0**2 + qf**2) * c(x) - 2 * q0 * qf)))
    return {"J": complex(Jt), "M1": complex(M1), "M2": complex(M2),
            "N1": complex(N1), "N2": complex(N2)}


def tilde_kernel(p: GupParams, basis: HermiteBasis, b: Boundary, T: complex | None = None) -> KernelValue:
    """Kernel assembled from the tilde factors, with its first-order slopes in meta."""
    T = b.T if T is None else T
    bb = Boundary(b.q0, b.qf, T, basis.omega)
    unit = GupParams(0.0, 1.0, None, basis.mass, basis.hbar)
    tf0 = tilde_factors(unit, basis, bb)
    pref = ho_prefactor(bb, unit) * np.exp(1j * complex(ho_s0(bb, unit)) / basis.hbar)
    mwh = basis.mass * basis.omega * basis.hbar
    slope_a = pref * 1j * alpha_coupling(basis) * (tf0["M1"] + tf0["M2"])
    slope_b = pref * ((tf0["J"] - 1) + mwh * (tf0["N1"] + tf0["N2"]))
    amp = pref + p.alpha * slope_a + p.beta * slope_b
    meta = {"order": "alpha, beta", "undeformed": complex(pref),
            "slope_alpha": complex(slope_a), "slope_beta": complex(slope_b)}
    return KernelValue(complex(amp), "tilde", meta)
