"""Time-sliced and Monte Carlo realizations of the GUP path integral.

A slice of duration ``tau`` carries the propagator obtained by integrating
out the momentum with the deformed Hamiltonian
``H = p**2/2m - alpha p**3/m + (alpha**2/2 + beta) p**4/m + V``. Euclidean
slices use ``tau = -1j * tau_E``; the same complex formula then gives the
imaginary-time weight.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .classical.boundary import Boundary, FreePotential
from .errors import DomainError, QuadratureError, StabilityError
from .kernels import KernelValue, sqrt_principal
from .numerics import gauss_rule
from .params import GupParams, kinetic_factor

MC_BATCHES = 20
QUAD_RTOL = 1e-6
MAX_QUAD_POINTS = 256


def _check_tau(tau) -> complex:
    t = complex(tau)
    real_ok = t.real > 0 and t.imag == 0
    eucl_ok = t.real == 0 and t.imag < 0
    if not (real_ok or eucl_ok) or not np.isfinite(t):
        raise DomainError(f"slice time must be > 0 or -i*tau_E with tau_E > 0, got {tau}")
    return t


@dataclass(frozen=True)
class SliceConfig:
    """Time slicing of a boundary problem.

    Attributes
    ----------
    n_slices : int
        Number of slices ``N``; ``N * tau`` must equal the total time.
    tau : complex
        Time per slice, real or ``-1j * tau_E``.
    q_extent : float or None
        Half-width of the integration window for intermediate points.
        ``None`` means ``8 sqrt(hbar tau_total / m)``, filled in by
        :meth:`for_boundary`.
    quad_points : int
        Starting Gauss-Legendre order per intermediate point.
    """

    n_slices: int
    tau: complex
    q_extent: float | None = None
    quad_points: int = 32

    def __post_init__(self):
        if int(self.n_slices) != self.n_slices or self.n_slices < 1:
            raise DomainError(f"n_slices must be a positive integer, got {self.n_slices}")
        _check_tau(self.tau)
        if self.q_extent is not None and not self.q_extent > 0:
            raise DomainError("q_extent must be positive")
        if not 2 <= self.quad_points <= MAX_QUAD_POINTS:
            raise DomainError(f"quad_points must lie in [2, {MAX_QUAD_POINTS}]")

    @classmethod
    def for_boundary(cls, b: Boundary, n_slices: int, p: GupParams,
                     quad_points: int = 32) -> "SliceConfig":
        total = abs(complex(b.T))
        return cls(n_slices, complex(b.T) / n_slices, 8 * math.sqrt(p.hbar * total / p.mass),
                   quad_points)

    @property
    def total_time(self) -> complex:
        return self.n_slices * complex(self.tau)

    def check_against(self, b: Boundary, p: GupParams):
        T = complex(b.T)
        if abs(self.total_time - T) > 1e-12 * abs(T):
            raise DomainError(f"n_slices*tau = {self.total_time} differs from T = {b.T}")
        if self.q_extent is not None:
            width = math.sqrt(p.hbar * abs(T) / p.mass)
            if self.q_extent < 6 * width:
                raise DomainError(f"q_extent {self.q_extent:g} covers fewer than 6 widths ({width:g})")

    def to_dict(self) -> dict[str, Any]:
        t = complex(self.tau)
        return {"n_slices": self.n_slices, "tau": {"re": t.real, "im": t.imag},
                "q_extent": self.q_extent, "quad_points": self.quad_points}


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate of the kernel ratio ``K_GUP / K_undeformed``."""

    mean: complex
    std_error: float
    n_samples: int
    seed: int
    meta: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"mean": {"re": self.mean.real, "im": self.mean.imag},
                "std_error": self.std_error, "n_samples": self.n_samples,
                "seed": self.seed, "method": "lattice", "meta": self.meta}


def _potential_values(potential, q):
    if potential is None:
        return np.zeros_like(np.asarray(q, dtype=float))
    return np.asarray(potential(q), dtype=float)


def slice_bracket(dq, tau, p: GupParams):
    """The prefactor-free bracket of one slice (leading ``1`` included)."""
    m, hb, a, b = p.mass, p.hbar, p.alpha, p.beta
    return (1 + 3 * a * m * dq / tau + 3j * b * hb * m / tau - 6j * a * a * hb * m / tau
            - 6 * m * m * b * dq**2 / tau**2 + 19.5 * a * a * m * m * dq**2 / tau**2)


def slice_phase(dq, tau, p: GupParams):
    """The exponent of one slice without the potential."""
    m, hb, a, b = p.mass, p.hbar, p.alpha, p.beta
    return (1j * m * dq**2 / (2 * hb * tau) + 1j * a * m * m * dq**3 / (hb * tau**2)
            - 1j * b * m**3 * dq**4 / (hb * tau**3) + 4j * a * a * m**3 * dq**4 / (hb * tau**3))


def single_slice_propagator(q_from, q_to, tau, p: GupParams, potential: Callable | None = None):
    """Short-time propagator of one slice to second order in the couplings.

    ``sqrt(m/(2 pi i hbar tau)) [bracket] exp[phase - (i/hbar) tau V(q_from)]``.
    Works elementwise on arrays. Pass ``tau = -1j * tau_E`` for the Euclidean
    weight.
    """
    t = _check_tau(tau)
    dq = np.asarray(q_to, dtype=float) - np.asarray(q_from, dtype=float)
    pref = sqrt_principal(p.mass / (2j * math.pi * p.hbar * t))
    V = _potential_values(potential, q_from)
    out = pref * slice_bracket(dq, t, p) * np.exp(slice_phase(dq, t, p) - 1j * t * V / p.hbar)
    return out if np.ndim(out) else complex(out)


@dataclass(frozen=True)
class MomentExpansion:
    """Log of the momentum integral, split into slice bracket and classical phase.

    Each mapping goes from a coupling monomial (``"alpha"``, ``"beta"``,
    ``"alpha^2"``) to polynomial coefficients in ``dq`` (lowest power first).
    """

    log: dict[str, np.ndarray]
    phase: dict[str, np.ndarray]
    bracket: dict[str, np.ndarray]


def _gauss_moment(k: int, var: complex) -> complex:
    if k % 2:
        return 0j
    return math.prod(range(k - 1, 0, -2)) * var ** (k // 2)


def moment_expansion(tau, mass: float = 1.0, hbar: float = 1.0) -> MomentExpansion:
    """Integrate out the slice momentum with Gaussian moments.

    Writes ``p = m dq/tau + u`` so the free part is a complex Gaussian in
    ``u`` with variance ``-i m hbar/tau``. The deformation
    ``exp(-(i tau/hbar)(-alpha p**3 + (alpha**2/2 + beta) p**4)/m)`` is
    expanded to second order in alpha and first in beta and averaged term by
    term. The classical phase of each coupling is its highest power of
    ``dq``; the remainder, re-exponentiated, is the slice bracket.
    """
    t = _check_tau(tau)
    m, hb = mass, hbar
    var = -1j * m * hb / t
    pbar = m / t
    # polynomials in (dq, u) as 2D arrays c[i, j] dq^i u^j
    pshift = np.zeros((2, 2), complex)
    pshift[1, 0], pshift[0, 1] = pbar, 1

    def pmul(x, y):
        out = np.zeros((x.shape[0] + y.shape[0] - 1, x.shape[1] + y.shape[1] - 1), complex)
        for i, j in zip(*np.nonzero(x)):
            out[i:i + y.shape[0], j:j + y.shape[1]] += x[i, j] * y
        return out

    p2 = pmul(pshift, pshift)
    p3 = pmul(p2, pshift)
    p4 = pmul(p3, pshift)
    x_alpha = (1j * t / (hb * m)) * p3                  # coefficient of alpha in the exponent
    x_quart = (-1j * t / (hb * m)) * p4                 # multiplies alpha^2/2 + beta

    def expect(poly):
        out = np.zeros(poly.shape[0], complex)
        for j in range(poly.shape[1]):
            out += poly[:, j] * _gauss_moment(j, var)
        return out

    e_alpha = expect(x_alpha)
    e_beta = expect(x_quart)
    e_alpha2 = _padd(expect(0.5 * x_quart), expect(0.5 * pmul(x_alpha, x_alpha)))
    log = {"alpha": e_alpha, "beta": e_beta,
           "alpha^2": _padd(e_alpha2, -0.5 * np.polynomial.polynomial.polymul(e_alpha, e_alpha))}
    phase, rest = {}, {}
    for key, c in log.items():
        c = _strip(c)
        top = np.zeros_like(c)
        top[-1] = c[-1]
        phase[key] = top
        rest[key] = _strip(c - top)
    bracket = {"alpha": rest["alpha"], "beta": rest["beta"],
               "alpha^2": _padd(rest["alpha^2"],
                                0.5 * np.polynomial.polynomial.polymul(rest["alpha"], rest["alpha"]))}
    return MomentExpansion(log, phase, {k: _strip(v) for k, v in bracket.items()})


def _padd(x, y):
    n = max(len(x), len(y))
    out = np.zeros(n, complex)
    out[:len(x)] += x
    out[:len(y)] += y
    return out


def _strip(c, tol: float = 1e-300):
    c = np.asarray(c, complex)
    nz = np.nonzero(np.abs(c) > tol)[0]
    return c[: nz[-1] + 1] if len(nz) else np.zeros(1, complex)


def closed_slice_coefficients(tau, mass: float = 1.0, hbar: float = 1.0) -> MomentExpansion:
    """The closed-form slice coefficients in the same layout as :func:`moment_expansion`."""
    t = _check_tau(tau)
    m, hb = mass, hbar
    bracket = {"alpha": np.array([0, 3 * m / t], complex),
               "beta": np.array([3j * hb * m / t, 0, -6 * m * m / t**2], complex),
               "alpha^2": np.array([-6j * hb * m / t, 0, 19.5 * m * m / t**2], complex)}
    phase = {"alpha": np.array([0, 0, 0, 1j * m * m / (hb * t**2)], complex),
             "beta": np.array([0, 0, 0, 0, -1j * m**3 / (hb * t**3)], complex),
             "alpha^2": np.array([0, 0, 0, 0, 4j * m**3 / (hb * t**3)], complex)}
    return MomentExpansion({}, phase, bracket)


def sliced_kernel_quadrature(b: Boundary, cfg: SliceConfig, p: GupParams,
                             potential: Callable | None = None) -> KernelValue:
    """Iterated quadrature over intermediate slice positions (``n_slices <= 3``).

    Intermediate points are integrated with Gauss-Legendre rules on windows
    of half-width ``q_extent`` around the straight line. The order doubles
    from ``cfg.quad_points`` until the relative change drops below 1e-6.
    The amplitude is absolute (each slice carries its own normalization);
    ``meta["ratio_to_undeformed"]`` divides by the same lattice at
    ``alpha = beta = 0``.
    """
    cfg.check_against(b, p)
    tau = complex(cfg.tau)
    N = cfg.n_slices
    if N == 1:
        amp = single_slice_propagator(b.q0, b.qf, tau, p, potential)
        amp0 = single_slice_propagator(b.q0, b.qf, tau, p.replace(alpha=0.0, beta=0.0, n_link=None),
                                       potential)
        return KernelValue(amp, "lattice", {"n_slices": 1, "ratio_to_undeformed": amp / amp0})
    if N > 3:
        raise DomainError("iterated quadrature supports at most 3 slices")
    if not (tau.real == 0 and tau.imag < 0):
        raise DomainError("multi-slice quadrature needs Euclidean time")
    extent = cfg.q_extent if cfg.q_extent is not None else \
        8 * math.sqrt(p.hbar * abs(cfg.total_time) / p.mass)
    p0 = p.replace(alpha=0.0, beta=0.0, n_link=None)

    def evaluate(order, pp):
        rule = gauss_rule("legendre", order)
        grids = []
        for j in range(1, N):
            centre = b.q0 + b.dq * j / N
            grids.append((centre + extent * rule.nodes, extent * rule.weights))
        x, wx = grids[0]
        left = single_slice_propagator(b.q0, x, tau, pp, potential) * wx
        if N == 2:
            right = single_slice_propagator(x, b.qf, tau, pp, potential)
            return complex(np.sum(left * right))
        y, wy = grids[1]
        mid = single_slice_propagator(x[:, None], y[None, :], tau, pp, potential)
        right = single_slice_propagator(y, b.qf, tau, pp, potential) * wy
        return complex(left @ mid @ right)

    def evaluate_checked(order, pp):
        with np.errstate(over="ignore", invalid="ignore"):
            val = evaluate(order, pp)
        if not np.isfinite(val):
            raise StabilityError("slice weights overflow on the quadrature window "
                                 "(quartic phase not damped; is beta < 4 alpha**2?)")
        return val

    order = cfg.quad_points
    prev = evaluate_checked(order, p)
    history = [(order, prev)]
    while True:
        if 2 * order > MAX_QUAD_POINTS:
            raise QuadratureError(f"no convergence to {QUAD_RTOL:g} by {MAX_QUAD_POINTS} points; "
                                  f"history={[(o, abs(v)) for o, v in history]}")
        order *= 2
        cur = evaluate_checked(order, p)
        history.append((order, cur))
        change = abs(cur - prev) / max(abs(cur), 1e-300)
        if change < QUAD_RTOL:
            break
        prev = cur
    amp0 = evaluate_checked(order, p0)
    meta = {"n_slices": N, "quad_points": order, "q_extent": extent,
            "relative_change": change, "ratio_to_undeformed": cur / amp0}
    return KernelValue(cur, "lattice", meta)


def euclidean_action(path, tau: float, p: GupParams, potential: Callable | None = None) -> complex:
    """Lattice Euclidean action of a path sampled on a uniform grid.

    ``sum_j tau [(m/2) v_j**2 (1 + 2i alpha m v_j + (2 beta - 8 alpha**2) m**2 v_j**2) + V(q_j)]``
    with ``v_j = (q_{j+1} - q_j)/tau``. Continuing ``t = -i tau`` turns the
    odd alpha term imaginary, so the action is complex whenever alpha != 0.
    Works along the last axis, so a batch of paths may be passed.
    """
    if not tau > 0:
        raise DomainError("tau must be positive")
    q = np.asarray(path, dtype=float)
    v = np.diff(q, axis=-1) / tau
    m = p.mass
    kin = 0.5 * m * v * v * (1 + 2j * p.alpha * m * v + (2 * p.beta - 8 * p.alpha**2) * m * m * v * v)
    V = _potential_values(potential, q[..., :-1])
    out = tau * np.sum(kin + V, axis=-1)
    return out if np.ndim(out) else complex(out)


def slice_log_weight(v, tau: float, p: GupParams):
    """First- and second-order parts of the log of one Euclidean slice ratio.

    Returns ``(l1, l2)`` such that the slice weight divided by its undeformed
    value is ``exp(l1 + l2)`` up to third-order terms.
    """
    m, hb, a, b = p.mass, p.hbar, p.alpha, p.beta
    l1 = 3j * a * m * v - 1j * a * m * m * tau * v**3 / hb
    l2 = (-3 * b * hb * m / tau + 6 * a * a * hb * m / tau - 15 * a * a * m * m * v * v
          + 6 * b * m * m * v * v - (b - 4 * a * a) * m**3 * tau * v**4 / hb)
    return l1, l2


def free_ratio_prediction(b: Boundary, p: GupParams) -> complex:
    """Analytic Euclidean free-particle kernel ratio to first order in beta and second in alpha.

    A free particle's deformed Hamiltonian depends on momentum only, so one
    slice spanning the whole interval already equals the continuum kernel.
    """
    tau = b.tau
    l1, l2 = slice_log_weight(b.dq / tau, tau, p)
    return complex(1 + l1 + l2 + 0.5 * l1 * l1)


def _bridge_batch(gen: np.random.Generator, n: int, b: Boundary, tau: float, N: int, p: GupParams):
    steps = gen.standard_normal((n, N)) * math.sqrt(p.hbar * tau / p.mass)
    walk = np.cumsum(steps, axis=1)
    frac = np.arange(1, N + 1) / N
    inner = b.q0 + b.dq * frac + walk - frac * walk[:, -1:]
    return np.concatenate([np.full((n, 1), b.q0), inner], axis=1)


def _threads() -> int:
    raw = os.environ.get("GUP_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise DomainError(f"GUP_THREADS must be an integer, got {raw!r}") from exc


def euclidean_mc_kernel(b: Boundary, cfg: SliceConfig, p: GupParams,
                        potential: Callable | None = None, n_samples: int = 100_000,
                        seed: int = 0) -> McEstimate:
    """Reweighting estimate of ``K_GUP / K_undeformed`` in Euclidean time.

    Paths are free Brownian bridges pinned at ``q0`` and ``qf``. Each slice
    contributes its log ratio from :func:`slice_log_weight`; the path weight
    ``1 + S1 + S2 + S1**2/2`` keeps the orders the analytic kernels keep.
    With a potential, both numerator and denominator carry
    ``exp(-sum tau V/hbar)``. Batch ``k`` draws from ``Philox(seed)`` jumped
    ``k`` times, so results do not depend on the thread count.
    """
    if not b.is_euclidean:
        raise DomainError("Monte Carlo needs Euclidean time")
    cfg.check_against(b, p)
    if n_samples < MC_BATCHES:
        raise DomainError(f"n_samples must be at least {MC_BATCHES}")
    if int(seed) != seed or not 0 <= seed < 2**64:
        raise DomainError("seed must be an integer in [0, 2**64)")
    tau = -complex(cfg.tau).imag
    N = cfg.n_slices
    sizes = [n_samples // MC_BATCHES + (k < n_samples % MC_BATCHES) for k in range(MC_BATCHES)]
    pot = None if isinstance(potential, FreePotential) else potential
    trivial = p.alpha == 0 and p.beta == 0

    def batch(k):
        gen = np.random.Generator(np.random.Philox(int(seed)).jumped(k))
        path = _bridge_batch(gen, sizes[k], b, tau, N, p)
        v = np.diff(path, axis=1) / tau
        if not trivial:
            vmax = np.max(np.abs(v))
            if kinetic_factor(p, vmax) <= 0 or kinetic_factor(p, -vmax) <= 0:
                raise StabilityError(f"kinetic factor non-positive at sampled speed {vmax:.4g}")
        l1, l2 = slice_log_weight(v, tau, p)
        s1, s2 = l1.sum(axis=1), l2.sum(axis=1)
        w = 1 + s1 + s2 + 0.5 * s1 * s1
        if pot is None:
            return complex(np.sum(w)), float(sizes[k])
        wv = np.exp(-tau * np.sum(_potential_values(pot, path[:, :-1]), axis=1) / p.hbar)
        return complex(np.sum(wv * w)), float(np.sum(wv))

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        parts = list(pool.map(batch, range(MC_BATCHES)))
    nums = np.array([x for x, _ in parts])
    dens = np.array([y for _, y in parts])
    ratios = nums / dens
    mean = complex(np.sum(nums) / np.sum(dens))
    spread = np.std(ratios.real, ddof=1) ** 2 + np.std(ratios.imag, ddof=1) ** 2
    std_error = float(math.sqrt(spread / MC_BATCHES))
    meta = {"n_slices": N, "tau_slice": tau, "batches": MC_BATCHES, "rng": "Philox",
            "estimator": "first-order reweighting"}
    return McEstimate(mean, std_error, int(n_samples), int(seed), meta)
