"""The bilinear generating function for index-shifted Hermite products."""
from __future__ import annotations

import math

import numpy as np

from ..errors import ConvergenceError, DomainError, MagnitudeError
from .hermite import hermite_normalized_table, hermite_poly

_LOG_LIMIT = 700.0


def mehler_closed(m: int, n: int, t: complex, x, y):
    """Closed form of ``sum_k t^k/k! H_{k+m}(x) H_{k+n}(y)`` for ``|4 t^2| < 1``.

    ``(1-4t^2)^{-(m+n+1)/2} exp[(4txy - 4t^2(x^2+y^2))/(1-4t^2)]
    * sum_{k<=min(m,n)} 4^k k! C(m,k) C(n,k) t^k H_{m-k}(u) H_{n-k}(v)``
    with ``u = (x - 2ty)/sqrt(1-4t^2)`` and ``v = (y - 2tx)/sqrt(1-4t^2)``.
    """
    if m < 0 or n < 0 or m > 8 or n > 8:
        raise DomainError("m and n must lie in 0..8")
    t = complex(t)
    d = 1 - 4 * t * t
    if abs(4 * t * t) >= 1:
        raise ConvergenceError("|4 t^2| >= 1: the series diverges")
    sq = np.sqrt(d)
    u = (x - 2 * t * y) / sq
    v = (y - 2 * t * x) / sq
    total = 0
    for k in range(min(m, n) + 1):
        total = total + (4**k * math.factorial(k) * math.comb(m, k) * math.comb(n, k) * t**k
                         * hermite_poly(m - k, u) * hermite_poly(n - k, v))
    pref = d ** (-(m + n + 1) / 2) * np.exp((4 * t * x * y - 4 * t * t * (x * x + y * y)) / d)
    out = pref * total
    return out if np.ndim(out) else complex(out)


def mehler_terms(m: int, n: int, t: complex, x: float, y: float, K: int):
    """The individual terms ``k = 0..K`` of the series.

    Each term is assembled in log-magnitude form,
    ``t^k/k! sqrt(2^{k+m}(k+m)! 2^{k+n}(k+n)!) h_{k+m}(x) h_{k+n}(y)`` with
    ``h_j = H_j / sqrt(2^j j!)``, and rejected before it can overflow.
    """
    if K < 0:
        raise DomainError("K must be >= 0")
    t = complex(t)
    hx = hermite_normalized_table(K + m, x)
    hy = hermite_normalized_table(K + n, y)
    terms = np.zeros(K + 1, dtype=complex)
    log_t = math.log(abs(t)) if t != 0 else -math.inf
    phase = t / abs(t) if t != 0 else 1
    for k in range(K + 1):
        if t == 0 and k > 0:
            break
        log_mag = (k * log_t if k else 0.0) - math.lgamma(k + 1) + 0.5 * (
            (2 * k + m + n) * math.log(2) + math.lgamma(k + m + 1) + math.lgamma(k + n + 1))
        if log_mag > _LOG_LIMIT:
            raise MagnitudeError(f"term k={k} overflows (log-magnitude {log_mag:.0f}); reduce K")
        terms[k] = math.exp(log_mag) * phase**k * hx[k + m] * hy[k + n]
    if not np.all(np.isfinite(terms)):
        raise MagnitudeError("non-finite partial sum; reduce K or |x|, |y|")
    return terms


def mehler_partial(m: int, n: int, t: complex, x: float, y: float, K: int) -> complex:
    """Partial sum ``sum_{k<=K} t^k/k! H_{k+m}(x) H_{k+n}(y)``."""
    return complex(np.sum(mehler_terms(m, n, t, x, y, K)))
