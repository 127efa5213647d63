"""Small numerical building blocks shared across the package."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import hermite, legendre
from scipy import optimize

from .errors import BracketError, ConvergenceError, DomainError, NumericError


def rk4_integrate(f: Callable, y0, t0: float, t1: float, steps: int):
    """Classical fixed-step fourth-order Runge-Kutta.

    Parameters
    ----------
    f : callable
        ``f(t, y) -> dy/dt``. ``y`` has the shape of ``y0``, so a batch of
        independent initial conditions can be advanced at once by giving
        ``y0`` a trailing batch axis.
    y0 : array_like
        Initial state.
    t0, t1 : float
        Integration interval.
    steps : int
        Number of equal steps, at least 1.

    Returns
    -------
    ts : ndarray, shape (steps + 1,)
    ys : ndarray, shape (steps + 1,) + shape of ``y0``
    """
    if steps < 1:
        raise DomainError("steps must be >= 1")
    y = np.array(y0, dtype=float, ndmin=1)
    ts = np.linspace(t0, t1, steps + 1)
    h = (t1 - t0) / steps
    ys = np.empty((steps + 1,) + y.shape)
    ys[0] = y

    def call(t, state):
        d = np.asarray(f(t, state), dtype=float)
        if not np.all(np.isfinite(d)):
            raise NumericError(f"non-finite derivative at t={t:g}")
        return d

    for k in range(steps):
        t = ts[k]
        k1 = call(t, y)
        k2 = call(t + h / 2, y + h / 2 * k1)
        k3 = call(t + h / 2, y + h / 2 * k2)
        k4 = call(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[k + 1] = y
    return ts, ys


def bisect_root(g: Callable[[float], float], lo: float, hi: float,
                tol: float = 1e-12) -> float:
    """Root of ``g`` inside ``[lo, hi]`` by bisection, to bracket width ``tol``."""
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        return float(lo)
    if ghi == 0:
        return float(hi)
    if np.sign(glo) == np.sign(ghi):
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    return float(optimize.bisect(g, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps,
                                 maxiter=2000))


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a Gauss rule.

    Legendre rules live on [-1, 1]; Hermite rules carry the weight exp(-x**2).
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str

    def integrate(self, f: Callable, a: float = -1.0, b: float = 1.0):
        """Apply the rule to ``f``; Legendre rules are mapped onto ``[a, b]``."""
        if self.kind == "hermite":
            return np.sum(self.weights * f(self.nodes))
        half = 0.5 * (b - a)
        x = 0.5 * (a + b) + half * self.nodes
        return half * np.sum(self.weights * f(x))


def gauss_rule(kind: str, order: int) -> QuadratureRule:
    """Gauss-Legendre or Gauss-Hermite rule with ``order`` nodes (2..256)."""
    if not 2 <= order <= 256:
        raise DomainError(f"order must lie in [2, 256], got {order}")
    if kind == "legendre":
        x, w = legendre.leggauss(order)
    elif kind == "hermite":
        x, w = hermite.hermgauss(order)
    else:
        raise DomainError(f"unknown rule kind {kind!r}")
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(x, w, kind)


def _round_robin(m: int):
    """Rounds of disjoint pairs covering every pair of ``range(m)`` once (m even)."""
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        rounds.append([(players[k], players[m - 1 - k]) for k in range(m // 2)])
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def symmetric_eigen(matrix, tol: float = 1e-12, max_sweeps: int = 60,
                    symmetry_tol: float = 1e-12) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, grouped into rounds of
    disjoint pairs so that a whole round is applied as one vectorized
    update. Iteration stops when the off-diagonal Frobenius norm drops
    below ``tol`` times the Frobenius norm of the input.

    Returns
    -------
    ndarray
        Eigenvalues in ascending order.
    """
    a = np.array(matrix, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError("matrix must be square")
    n = a.shape[0]
    scale = np.linalg.norm(a)
    if np.max(np.abs(a - a.T), initial=0.0) > symmetry_tol * max(scale, 1.0):
        raise DomainError("matrix is not symmetric")
    if n <= 1 or scale == 0:
        return np.sort(np.diag(a))
    a = 0.5 * (a + a.T)
    m = n + (n % 2)
    rounds = []
    for pairs in _round_robin(m):
        pq = np.array([pr for pr in pairs if max(pr) < n])
        if len(pq):
            rounds.append((pq[:, 0], pq[:, 1]))

    offmask = ~np.eye(n, dtype=bool)

    def off_norm():
        # direct sum; subtracting the diagonal from the total cancels badly
        return float(np.linalg.norm(a[offmask]))

    for _ in range(max_sweeps):
        if off_norm() < tol * scale:
            return np.sort(np.diag(a))
        for p, q in rounds:
            apq = a[p, q]
            app = a[p, p]
            aqq = a[q, q]
            active = apq != 0
            with np.errstate(over="ignore"):
                # a huge theta overflows to inf and gives t = 0, the correct limit
                theta = np.where(active, (aqq - app) / (2 * np.where(active, apq, 1.0)), 0.0)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1))
            t = np.where(active, t, 0.0)
            c = 1 / np.sqrt(t * t + 1)
            s = t * c
            cp, cq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            rp, rq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0
    if off_norm() < tol * scale:
        return np.sort(np.diag(a))
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
