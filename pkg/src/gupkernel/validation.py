"""Validation sweeps shared by ``gup check`` and the acceptance tests.

Every function returns a plain dictionary with the measured quantities and
a boolean ``passed`` computed against the stated tolerance. Nothing here
adjusts a tolerance after seeing the data.
"""
from __future__ import annotations

import math
import time
from typing import Any

import numpy as np

from .algebra import jacobi_residual, match_representation, solve_jacobi_constraints
from .classical import (Boundary, action_quadrature, eom_residual, free_action, ho_action,
                        ho_s_beta, ho_s_beta_grouped, ho_trajectory)
from .kernels import ho_kernel_semiclassical
from .lattice import (SliceConfig, euclidean_mc_kernel, free_ratio_prediction,
                      moment_expansion, closed_slice_coefficients)
from .params import GupParams, kinetic_factor, max_free_velocity, validate_params
from .spectral import (HermiteBasis, diagonalize_oracle, energy_beta_slope,
                       hamiltonian_matrix, mehler_closed, mehler_partial, spectral_kernel,
                       tilde_kernel)

EPS_LADDER = (1e-1, 1e-2, 1e-3)
SCALING_BOUNDARY = Boundary(0.3, 0.8, 1.0, 1.0)


def _loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def velocity_bound_grid() -> dict[str, Any]:
    """Kinetic-factor residual of the velocity bound on a 9-point grid."""
    rows = []
    for alpha in (0.01, 0.05, 0.1):
        for ratio in (3.7, 4.5, 6.0):
            p = GupParams(alpha, ratio * alpha**2)
            v = max_free_velocity(p)
            rep = validate_params(p)
            rows.append({"alpha": alpha, "beta": p.beta, "vmax": v,
                         "residual": abs(kinetic_factor(p, v)),
                         "positive": v > 0, "beta_gt_4alpha2": p.beta > 4 * alpha**2,
                         "report_positive": rep.positive_vmax})
    worst = max(r["residual"] for r in rows)
    iff = all(r["positive"] == r["beta_gt_4alpha2"] == r["report_positive"] for r in rows)
    return {"rows": rows, "max_residual": worst, "positivity_iff": iff,
            "passed": worst < 1e-10 and iff}


def jacobi_check() -> dict[str, Any]:
    """Jacobi constraints and the representation match for general and ``n = 1``."""
    cons = solve_jacobi_constraints(jacobi_residual())
    rep = match_representation()
    rep1 = match_representation(1)
    want = ["alpha1=alpha2", "beta2=2*beta1+alpha1^2"]
    got_b = rep.solved().get("b")
    got_b1 = rep1.solved().get("b")
    return {"constraints": cons.strings(), "representation": rep.solved(),
            "representation_n1": rep1.solved(),
            "passed": cons.strings() == want and got_b == "(n+1)*alpha^2"
            and got_b1 == "2*alpha^2"}


def eom_scaling(alpha0: float = 0.5, beta0: float = 0.5, b: Boundary = SCALING_BOUNDARY,
                eps=EPS_LADDER, grid: int = 401) -> dict[str, Any]:
    """Sup-norm EOM residual of the perturbative path under ``(eps alpha0, eps^2 beta0)``."""
    t = np.linspace(0.0, b.real_time(), grid)
    res, bnd = [], []
    for e in eps:
        p = GupParams(e * alpha0, e * e * beta0)
        traj = ho_trajectory(b, p)
        res.append(float(np.max(np.abs(eom_residual(traj, p)(t)))))
        bnd.append(max(abs(traj.position(0.0) - b.q0), abs(traj.position(b.T) - b.qf)))
    slope = _loglog_slope(eps, res)
    worst_b = float(max(bnd))
    return {"eps": list(eps), "residuals": res, "slope": slope, "boundary_error": worst_b,
            "target_slope": 2.0, "passed": abs(slope - 2.0) <= 0.1 and worst_b < 1e-12}


def action_ladder(alpha0: float = 0.5, beta0: float = 0.5, b: Boundary = SCALING_BOUNDARY,
                  eps=EPS_LADDER, seed: int = 7) -> dict[str, Any]:
    """Closed-form versus quadrature action, the free limit and the two beta forms."""
    diffs, consts = [], []
    for e in eps:
        p = GupParams(e * alpha0, e * e * beta0)
        closed = ho_action(b, p).total
        quad = action_quadrature(ho_trajectory(b, p), p)
        d = abs(closed - quad)
        diffs.append(float(d))
        consts.append(float(d / e**2))
    cmean = float(np.mean(consts))
    spread = float(max(abs(c - cmean) for c in consts) / cmean) if cmean else math.inf
    ladder_ok = spread <= 0.2

    p = GupParams(0.01, 0.002)
    bw = Boundary(0.3, 0.8, 1.0, 1e-4)
    bf = Boundary(0.3, 0.8, 1.0, 0.0)
    ho = ho_action(bw, p).total
    fr = free_action(bf, p).total
    free_rel = float(abs(ho - fr) / abs(fr))

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        q0, qf = rng.uniform(-1, 1, 2)
        T = rng.uniform(0.2, 2.5)
        w = rng.uniform(0.3, 2.0)
        m = rng.uniform(0.5, 2.0)
        bb = Boundary(q0, qf, T, w)
        if abs(math.sin(w * T)) < 0.05:
            bb = Boundary(q0, qf, T * 0.9, w)
        pp = GupParams(0.0, 1.0, None, m)
        x, y = ho_s_beta(bb, pp), ho_s_beta_grouped(bb, pp)
        worst = max(worst, float(abs(x - y) / max(1.0, abs(x))))
    return {"eps": list(eps), "differences": diffs, "C": consts, "C_spread": spread,
            "ladder_passed": ladder_ok, "free_limit_relative": free_rel,
            "free_limit_passed": free_rel < 1e-6, "beta_forms_max": worst,
            "beta_forms_passed": worst < 1e-12,
            "passed": ladder_ok and free_rel < 1e-6 and worst < 1e-12}


def spectrum_check(betas=(1e-4, 1e-3), n_max: int = 200, levels: int = 11,
                   tol: float = 0.02) -> dict[str, Any]:
    """Diagonalized level shifts against the first-order beta slope (alpha = 0)."""
    basis = HermiteBasis(1.0, 1.0, 1.0, n_max)
    rows = []
    for beta in betas:
        p = GupParams(0.0, beta)
        ev = diagonalize_oracle(hamiltonian_matrix(p, basis)).energies
        for n in range(levels):
            shift = ev[n] - (n + 0.5) * basis.hbar * basis.omega
            pred = beta * energy_beta_slope(basis, n)
            rows.append({"beta": beta, "n": n, "shift": float(shift), "first_order": pred,
                         "relative": float(abs(shift / pred - 1))})
    worst = max(r["relative"] for r in rows)
    return {"rows": rows, "max_relative": worst, "tolerance": tol,
            "failures": [(r["beta"], r["n"]) for r in rows if r["relative"] > tol],
            "passed": worst <= tol}


MEHLER_T = (-0.3, -0.15, 0.0, 0.15, 0.3)
MEHLER_XY = (-2.0, -1.0, 0.0, 1.0, 2.0)


def mehler_sweep(K: int = 60, tol: float = 1e-9, mn_max: int = 4) -> dict[str, Any]:
    """Partial sums against the closed form on the 125-point ``(t, x, y)`` grid, all ``m, n``.

    The error is ``|partial - closed| / max(1, |closed|)``.
    """
    worst, where, fails, count = 0.0, None, 0, 0
    for m in range(mn_max + 1):
        for n in range(mn_max + 1):
            for t in MEHLER_T:
                for x in MEHLER_XY:
                    for y in MEHLER_XY:
                        c = mehler_closed(m, n, t, x, y)
                        s = mehler_partial(m, n, t, x, y, K)
                        err = abs(s - c) / max(1.0, abs(c))
                        count += 1
                        if err > tol:
                            fails += 1
                        if err > worst:
                            worst, where = err, {"m": m, "n": n, "t": t, "x": x, "y": y}
    return {"K": K, "points": count, "grid_points": len(MEHLER_T) * len(MEHLER_XY) ** 2,
            "max_error": worst, "worst_at": where, "failures": fails, "tolerance": tol,
            "passed": fails == 0}


KERNEL_POINTS = ((0.2, 0.5, 1.0), (-0.4, 0.7, 0.6), (0.3, -0.1, 1.5))


def _rel(a: complex, b: complex, scale: float) -> float:
    return abs(a - b) / max(abs(b), 1e-12 * scale)


def kernel_consistency(n_max: int = 120, mass: float = 1.0, omega: float = 1.0,
                       hbar: float = 1.0) -> dict[str, Any]:
    """Spectral, tilde and semiclassical Euclidean kernels and their slopes."""
    basis = HermiteBasis(mass, omega, hbar, n_max)
    p0 = GupParams(0.0, 0.0, None, mass, hbar)
    b = Boundary.euclidean(0.0, 0.0, 1.0, omega)
    exact = math.sqrt(mass * omega / (2 * math.pi * hbar * math.sinh(omega)))
    zero_err = abs(spectral_kernel(p0, basis, b).amplitude - exact)
    rows = []
    for q0, qf, tau in KERNEL_POINTS:
        bb = Boundary.euclidean(q0, qf, tau, omega)
        sp = spectral_kernel(p0, basis, bb).meta
        tk = tilde_kernel(p0, basis, bb).meta
        sc = ho_kernel_semiclassical(bb, p0).meta
        scale = abs(sp["undeformed"])
        row = {"q0": q0, "qf": qf, "tau": tau}
        for key in ("slope_alpha", "slope_beta"):
            row[key + "_vs_tilde"] = _rel(sp[key], tk[key], scale)
            row[key + "_vs_semiclassical"] = _rel(sp[key], sc[key], scale)
        rows.append(row)
    worst = max(v for r in rows for k, v in r.items() if k.startswith("slope"))
    return {"zero_point_value": exact, "zero_point_error": zero_err, "rows": rows,
            "max_slope_relative": worst, "passed": zero_err < 1e-8 and worst < 1e-6}


def lattice_check(n_samples: int = 100_000, seed: int = 42, beta: float = 1e-4,
                  n_slices: int = 64) -> dict[str, Any]:
    """Moment-oracle coefficients and the Euclidean Monte Carlo benchmark."""
    worst = 0.0
    for tau in (0.7, 1.3, -0.4j, -1.1j):
        me, pr = moment_expansion(tau, 1.3, 0.8), closed_slice_coefficients(tau, 1.3, 0.8)
        for part in ("phase", "bracket"):
            for key, want in getattr(pr, part).items():
                got = getattr(me, part)[key]
                n = max(len(got), len(want))
                g, w = np.pad(got, (0, n - len(got))), np.pad(want, (0, n - len(want)))
                scale = np.maximum(np.abs(w), 1.0)
                worst = max(worst, float(np.max(np.abs(g - w) / scale)))
    b = Boundary.euclidean(0.1, 0.3, 1.0)
    p = GupParams(0.0, beta)
    cfg = SliceConfig.for_boundary(b, n_slices, p)
    start = time.perf_counter()
    est = euclidean_mc_kernel(b, cfg, p, None, n_samples, seed)
    again = euclidean_mc_kernel(b, cfg, p, None, n_samples, seed)
    elapsed = time.perf_counter() - start
    pred = free_ratio_prediction(b, p)
    z = abs(est.mean - pred) / est.std_error
    return {"moment_max_error": worst, "mc_mean": est.mean, "mc_std_error": est.std_error,
            "prediction": pred, "z": float(z), "deterministic": est.mean == again.mean
            and est.std_error == again.std_error, "seconds": elapsed,
            "passed": worst < 1e-10 and z <= 3 and est.mean == again.mean}
