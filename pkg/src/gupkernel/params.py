"""GUP deformation parameters and the constraints relating them.

All quantities are in natural units chosen by the caller; nothing here
enforces a unit system.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import DegenerateError, DomainError, ImaginaryRootError

_LINK_RTOL = 1e-12
_CMP_RTOL = 1e-15


@dataclass(frozen=True)
class GupParams:
    """Deformation strengths plus the particle's mass and Planck constant.

    Attributes
    ----------
    alpha : float
        Linear correction strength, an inverse momentum. Must be >= 0.
    beta : float
        Quadratic correction strength, an inverse momentum squared.
    n_link : int or None
        When present, ``beta == (n_link + 1) * alpha**2`` is enforced.
    mass, hbar : float
        Positive mass and reduced Planck constant.
    """

    alpha: float = 0.0
    beta: float = 0.0
    n_link: int | None = None
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not (self.hbar > 0 and math.isfinite(self.hbar)):
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be non-negative, got {self.alpha}")
        if not math.isfinite(self.beta):
            raise DomainError(f"beta must be finite, got {self.beta}")
        if self.n_link is not None:
            if int(self.n_link) != self.n_link or self.n_link < 1:
                raise DomainError(f"n_link must be a positive integer, got {self.n_link}")
            want = (self.n_link + 1) * self.alpha**2
            if abs(self.beta - want) > _LINK_RTOL * max(abs(want), abs(self.beta)):
                raise DomainError(
                    f"beta={self.beta} violates beta=(n+1)*alpha^2={want} for n={self.n_link}"
                )

    def replace(self, **changes) -> "GupParams":
        fields = dict(alpha=self.alpha, beta=self.beta, n_link=self.n_link,
                      mass=self.mass, hbar=self.hbar)
        fields.update(changes)
        return GupParams(**fields)

    def to_dict(self) -> dict[str, Any]:
        return {"alpha": self.alpha, "beta": self.beta, "n": self.n_link,
                "mass": self.mass, "hbar": self.hbar}

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "GupParams":
        """Build from a mapping with keys ``alpha, beta, n, mass, hbar``.

        Unknown keys are rejected so typos do not pass silently. When ``n`` is
        given and ``beta`` is not, beta follows from the link relation.
        """
        allowed = {"alpha", "beta", "n", "mass", "hbar"}
        extra = set(doc) - allowed
        if extra:
            raise DomainError(f"unknown parameter keys: {sorted(extra)}")
        alpha = float(doc.get("alpha", 0.0))
        n = doc.get("n")
        mass = float(doc.get("mass", 1.0))
        hbar = float(doc.get("hbar", 1.0))
        if n is not None and "beta" not in doc:
            return params_from_n(alpha, int(n), mass, hbar)
        return cls(alpha, float(doc.get("beta", 0.0)),
                   None if n is None else int(n), mass, hbar)


def load_params(source: str | Path | Mapping[str, Any]) -> GupParams:
    """Read parameters from a JSON file path, a JSON string or a mapping."""
    if isinstance(source, Mapping):
        return GupParams.from_dict(source)
    text = str(source)
    if text.lstrip().startswith("{"):
        return GupParams.from_dict(json.loads(text))
    return GupParams.from_dict(json.loads(Path(text).read_text()))


@dataclass(frozen=True)
class ConstraintReport:
    """Which of the inter-parameter conditions a parameter set satisfies."""

    real_root: bool
    nondegenerate: bool
    positive_vmax: bool
    n_gt_3: bool | None = None
    messages: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict[str, Any]:
        return {"real_root": self.real_root, "nondegenerate": self.nondegenerate,
                "positive_vmax": self.positive_vmax, "n_gt_3": self.n_gt_3,
                "messages": list(self.messages)}


def planck_scale_params(alpha0: float, beta0: float, planck_momentum: float,
                        mass: float = 1.0, hbar: float = 1.0) -> GupParams:
    """Convert dimensionless strengths to alpha = alpha0/P, beta = beta0/P**2."""
    if not planck_momentum > 0:
        raise DomainError(f"planck_momentum must be positive, got {planck_momentum}")
    return GupParams(alpha0 / planck_momentum, beta0 / planck_momentum**2,
                     None, mass, hbar)


def params_from_n(alpha: float, n: int, mass: float = 1.0, hbar: float = 1.0) -> GupParams:
    """Parameters on the one-parameter family beta = (n + 1) alpha**2."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    return GupParams(alpha, (n + 1) * alpha**2, n, mass, hbar)


def _gt(x: float, y: float) -> bool:
    # strict comparison with the relative dead band used for the constraints
    return x - y > _CMP_RTOL * abs(y)


def validate_params(p: GupParams) -> ConstraintReport:
    """Evaluate the real-root, nondegeneracy and positivity conditions.

    The two thresholds 3.5 alpha**2 and 4 alpha**2 are both reported; they
    come from two different places in the analysis and neither is treated
    as the single validity condition.
    """
    a2 = p.alpha**2
    real_root = _gt(p.beta, 3.5 * a2)
    nondeg = abs(p.beta - 4 * a2) > _CMP_RTOL * 4 * a2 if a2 else p.beta != 0
    positive = _gt(p.beta, 4 * a2)
    msgs = []
    if not real_root:
        msgs.append(f"beta={p.beta:g} <= 3.5*alpha^2={3.5 * a2:g}: velocity bound is complex")
    if not nondeg:
        msgs.append("beta == 4*alpha^2: velocity bound denominator vanishes")
    if real_root and nondeg and not positive:
        msgs.append("beta < 4*alpha^2: velocity bound root is negative")
    n_gt_3 = None
    if p.n_link is not None:
        n_gt_3 = p.n_link > 3
        if not n_gt_3:
            msgs.append(f"n={p.n_link} <= 3: beta=(n+1)*alpha^2 does not exceed 4*alpha^2")
    return ConstraintReport(real_root, nondeg, positive, n_gt_3, tuple(msgs))


def max_free_velocity(p: GupParams) -> float:
    """Upper bound on the free-particle speed.

    Returns the root ``(-alpha - sqrt(2 beta - 7 alpha**2)) / (2 m (4 alpha**2 - beta))``
    of the kinetic factor ``1 + 2 alpha m v + (8 alpha**2 - 2 beta) m**2 v**2``.

    Raises
    ------
    ImaginaryRootError
        If ``2 beta - 7 alpha**2 < 0``.
    DegenerateError
        If ``beta == 4 alpha**2``.
    """
    a, b, m = p.alpha, p.beta, p.mass
    disc = 2 * b - 7 * a * a
    if disc < 0:
        raise ImaginaryRootError(f"2*beta - 7*alpha^2 = {disc:g} < 0")
    denom = 4 * a * a - b
    if denom == 0 or abs(denom) <= _CMP_RTOL * max(4 * a * a, abs(b)):
        raise DegenerateError("beta == 4*alpha^2")
    return (-a - math.sqrt(disc)) / (2 * m * denom)


def kinetic_factor(p: GupParams, v):
    """The Lagrangian kinetic factor ``1 + 2 alpha m v + (8 alpha**2 - 2 beta) m**2 v**2``."""
    m = p.mass
    return 1 + 2 * p.alpha * m * v + (8 * p.alpha**2 - 2 * p.beta) * m * m * v * v


def uncertainty_lower_bound(p: GupParams, mean_abs_p: float, mean_p: float,
                            delta_p: float) -> float:
    """One-dimensional lower bound on Delta q Delta p.

    ``(hbar/2) [1 - 2 alpha <|p|> - (2 alpha**2 - 3 beta)(Delta p**2 + <p>**2)]``
    """
    if delta_p < 0:
        raise DomainError("delta_p must be non-negative")
    if mean_abs_p < abs(mean_p):
        raise DomainError("mean_abs_p must be at least |mean_p|")
    second = delta_p**2 + mean_p**2
    return 0.5 * p.hbar * (1 - 2 * p.alpha * mean_abs_p
                           - (2 * p.alpha**2 - 3 * p.beta) * second)
