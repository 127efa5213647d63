"""Command-line interface: ``gup <command> ...``.

Every run prints one JSON document (or CSV with ``--format csv``) carrying
``schema_version``, the ``args`` it was called with, the merged ``config``
and either a ``result`` or an ``error`` object. Exit codes: 0 success,
1 physics or domain failure (including a failed check), 2 usage error.

Defaults: ``mass = hbar = omega = 1``, ``q0 = qf = 0``, ``T = 1``,
``format = json``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import validation
from .classical import (Boundary, HarmonicPotential, action_quadrature, bvp_shoot,
                        free_action, free_trajectory, ho_action, ho_trajectory)
from .errors import GupError
from .kernels import free_kernel, ho_kernel_semiclassical
from .lattice import SliceConfig, euclidean_mc_kernel, sliced_kernel_quadrature
from .params import GupParams, load_params, max_free_velocity, validate_params
from .spectral import (HermiteBasis, diagonalize_oracle, hamiltonian_matrix,
                       perturbative_spectrum, spectral_kernel)

SCHEMA_VERSION = 1
COMMANDS = ("validate", "vmax", "action", "kernel", "spectrum", "check")
CHECKS = ("jacobi", "mehler", "eom-scaling", "kernel-consistency")

PARAM_KEYS = ("alpha", "beta", "n", "mass", "hbar")
BOUNDARY_KEYS = ("q0", "qf", "T", "omega", "euclidean")
OPTION_DEFAULTS: dict[str, Any] = {
    "method": "semiclassical", "trunc": None, "n_max": 120, "slices": 1, "samples": None,
    "seed": 0, "quad_points": 32, "levels": 10, "oracle": False, "K": 60,
    "alpha0": 0.5, "beta0": 0.5,
}
BOUNDARY_DEFAULTS: dict[str, Any] = {"q0": 0.0, "qf": 0.0, "T": 1.0, "omega": 1.0,
                                     "euclidean": None}


class UsageError(Exception):
    """Bad command-line or config input; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    target: str | None = None
    params: dict[str, Any] = field(default_factory=dict)
    boundary: dict[str, Any] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)
    format: str = "json"
    argv: list[str] = field(default_factory=list)
    params_file: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"command": self.command, "target": self.target, "params": self.params,
                "boundary": self.boundary, "options": self.options, "format": self.format}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse's usage text, exit code 2
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    c.add_argument("--config", help="JSON RunConfig file supplying defaults")
    c.add_argument("--format", choices=("json", "csv"))
    return c


def _param_flags() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    c.add_argument("--alpha", type=float)
    c.add_argument("--beta", type=float)
    c.add_argument("--n", type=int, help="link index; beta defaults to (n+1) alpha^2")
    c.add_argument("--mass", type=float)
    c.add_argument("--hbar", type=float)
    c.add_argument("--params", dest="params_file", help="JSON file with GUP parameters")
    return c


def _boundary_flags() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    c.add_argument("--q0", type=float)
    c.add_argument("--qf", type=float)
    c.add_argument("--T", type=float)
    c.add_argument("--omega", type=float)
    c.add_argument("--euclidean", type=float, metavar="TAU", help="use T = -i TAU")
    return c


def build_parser() -> argparse.ArgumentParser:
    common, pf, bf = _common(), _param_flags(), _boundary_flags()
    top = _Parser(prog="gup", description=__doc__.splitlines()[0], parents=[common],
                  argument_default=argparse.SUPPRESS)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[common, pf], argument_default=argparse.SUPPRESS,
                   help="parameter constraint report")
    sub.add_parser("vmax", parents=[common, pf], argument_default=argparse.SUPPRESS,
                   help="free-particle velocity bound")
    act = sub.add_parser("action", parents=[common, pf, bf], argument_default=argparse.SUPPRESS,
                         help="classical action breakdown")
    act.add_argument("target", choices=("free", "ho"))
    act.add_argument("--oracle", action="store_true",
                     help="attach quadrature and shooting cross-checks")
    ker = sub.add_parser("kernel", parents=[common, pf, bf], argument_default=argparse.SUPPRESS,
                         help="propagation kernel")
    ker.add_argument("target", choices=("free", "ho"))
    ker.add_argument("--method", choices=("semiclassical", "spectral", "lattice"))
    ker.add_argument("--trunc", type=int, help="spectral truncation N")
    ker.add_argument("--n-max", dest="n_max", type=int, help="basis size for spectral sums")
    ker.add_argument("--slices", type=int)
    ker.add_argument("--samples", type=int, help="Monte Carlo samples (lattice)")
    ker.add_argument("--seed", type=int)
    ker.add_argument("--quad-points", dest="quad_points", type=int)
    spec = sub.add_parser("spectrum", parents=[common, pf], argument_default=argparse.SUPPRESS,
                          help="perturbative versus diagonalized levels")
    spec.add_argument("--n-max", dest="n_max", type=int)
    spec.add_argument("--levels", type=int)
    spec.add_argument("--omega", type=float)
    chk = sub.add_parser("check", parents=[common], argument_default=argparse.SUPPRESS,
                         help="validation suites")
    chk.add_argument("target", choices=CHECKS)
    chk.add_argument("--K", type=int, help="mehler: partial-sum length")
    chk.add_argument("--alpha0", type=float, help="eom-scaling: base alpha")
    chk.add_argument("--beta0", type=float, help="eom-scaling: base beta")
    return top


def _load_config(path: str) -> dict[str, Any]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(doc) - {"command", "target", "params", "boundary", "options", "format"}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return doc


def parse_args(argv: Sequence[str]) -> RunConfig:
    """Turn ``argv`` into a :class:`RunConfig`.

    Precedence: command-line flags, then the ``--config`` file, then defaults.
    Raises :class:`UsageError` on unknown flags or malformed input.
    """
    argv = list(argv)
    ns = vars(build_parser().parse_args(argv))
    base = _load_config(ns["config"]) if "config" in ns else {}
    command = ns["command"]
    if base.get("command", command) != command:
        raise UsageError(f"config is for {base['command']!r}, not {command!r}")
    target = ns.get("target", base.get("target"))
    params = {k: v for k, v in base.get("params", {}).items()}
    params.update({k: ns[k] for k in PARAM_KEYS if k in ns})
    boundary = dict(BOUNDARY_DEFAULTS)
    if target == "free":
        boundary["omega"] = 0.0
    boundary.update(base.get("boundary", {}))
    boundary.update({k: ns[k] for k in BOUNDARY_KEYS if k in ns})
    options = dict(OPTION_DEFAULTS)
    options.update(base.get("options", {}))
    options.update({k: ns[k] for k in OPTION_DEFAULTS if k in ns})
    unknown = set(options) - set(OPTION_DEFAULTS)
    if unknown:
        raise UsageError(f"unknown options: {sorted(unknown)}")
    fmt = ns.get("format", base.get("format", "json"))
    return RunConfig(command, target, params, boundary, options, fmt, argv,
                     ns.get("params_file"))


def _params(cfg: RunConfig) -> GupParams:
    doc: dict[str, Any] = {}
    if cfg.params_file:
        doc.update(load_params(cfg.params_file).to_dict())
        if doc.get("n") is None:
            doc.pop("n", None)
    doc.update(cfg.params)
    if "n" in cfg.params and "beta" not in cfg.params:
        doc.pop("beta", None)
    return GupParams.from_dict(doc)


def _boundary(cfg: RunConfig) -> Boundary:
    b = cfg.boundary
    omega = 0.0 if cfg.target == "free" else float(b["omega"])
    if b.get("euclidean") is not None:
        return Boundary.euclidean(float(b["q0"]), float(b["qf"]), float(b["euclidean"]), omega)
    return Boundary(float(b["q0"]), float(b["qf"]), float(b["T"]), omega)


def _cmd_validate(cfg):
    p = _params(cfg)
    out = {"params": p.to_dict(), "report": validate_params(p).to_dict()}
    try:
        out["vmax"] = max_free_velocity(p)
    except GupError as exc:
        out["vmax_error"] = {"type": type(exc).__name__, "message": str(exc)}
    return out


def _cmd_vmax(cfg):
    p = _params(cfg)
    return {"vmax": max_free_velocity(p), "params": p.to_dict()}


def _cmd_action(cfg):
    p, b = _params(cfg), _boundary(cfg)
    if cfg.target == "free":
        br = free_action(b, p)
        path = free_trajectory(b, p)
    else:
        br = ho_action(b, p)
        path = ho_trajectory(b, p)
    out = br.to_dict()
    out["total"] = br.total
    if cfg.options["oracle"]:
        potential = None if cfg.target == "free" else HarmonicPotential(p.mass, b.omega)
        quad = action_quadrature(path, p, potential)
        shot = action_quadrature(bvp_shoot(b, p, potential), p, potential)
        out["oracle"] = {"quadrature": quad, "quadrature_discrepancy": abs(quad - br.total),
                         "shooting": shot, "shooting_discrepancy": abs(shot - br.total)}
    return out


def _cmd_kernel(cfg):
    p, b = _params(cfg), _boundary(cfg)
    opt = cfg.options
    method = opt["method"]
    if method == "semiclassical":
        kv = free_kernel(b, p) if cfg.target == "free" else ho_kernel_semiclassical(b, p)
        return kv.to_dict()
    if method == "spectral":
        if cfg.target != "ho":
            raise UsageError("the spectral method needs the oscillator (kernel ho)")
        basis = HermiteBasis(p.mass, b.omega, p.hbar, int(opt["n_max"]))
        return spectral_kernel(p, basis, b, N=opt["trunc"]).to_dict()
    potential = None if cfg.target == "free" else HarmonicPotential(p.mass, b.omega)
    slices = int(opt["slices"])
    if opt["samples"] is not None:
        scfg = SliceConfig.for_boundary(b, slices, p)
        est = euclidean_mc_kernel(b, scfg, p, potential, int(opt["samples"]), int(opt["seed"]))
        doc = est.to_dict()
        doc["slice_config"] = scfg.to_dict()
        return doc
    scfg = SliceConfig.for_boundary(b, slices, p, int(opt["quad_points"]))
    doc = sliced_kernel_quadrature(b, scfg, p, potential).to_dict()
    doc["slice_config"] = scfg.to_dict()
    return doc


def _cmd_spectrum(cfg):
    p = _params(cfg)
    omega = float(cfg.boundary["omega"])
    basis = HermiteBasis(p.mass, omega, p.hbar, int(cfg.options["n_max"]))
    levels = int(cfg.options["levels"])
    pert = perturbative_spectrum(p, basis, levels).energies
    num = diagonalize_oracle(hamiltonian_matrix(p, basis)).energies[:levels]
    rows = [{"n": n, "perturbative": float(pert[n]), "numeric": float(num[n]),
             "delta": float(num[n] - pert[n])} for n in range(levels)]
    return {"n_max": basis.n_max, "rows": rows}


def _cmd_check(cfg):
    opt = cfg.options
    if cfg.target == "jacobi":
        return validation.jacobi_check()
    if cfg.target == "mehler":
        return validation.mehler_sweep(K=int(opt["K"]))
    if cfg.target == "eom-scaling":
        return validation.eom_scaling(float(opt["alpha0"]), float(opt["beta0"]))
    return validation.kernel_consistency()


_DISPATCH = {"validate": _cmd_validate, "vmax": _cmd_vmax, "action": _cmd_action,
             "kernel": _cmd_kernel, "spectrum": _cmd_spectrum, "check": _cmd_check}


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(np.real(x)), "im": float(np.imag(x))}
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.generic):
        return x.item()
    return x


def run(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    """Execute a parsed configuration; returns ``(exit_code, document)``."""
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "args": list(cfg.argv),
                           "config": _plain(cfg.to_dict())}
    try:
        result = _plain(_DISPATCH[cfg.command](cfg))
    except UsageError as exc:
        doc["error"] = {"type": "UsageError", "message": str(exc)}
        return 2, doc
    except GupError as exc:
        doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return 1, doc
    doc["result"] = result
    if cfg.command == "check" and not result.get("passed", True):
        return 1, doc
    return 0, doc


def _flatten(prefix: str, x, out: list):
    if isinstance(x, dict):
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(x, list) and not all(isinstance(v, dict) for v in x):
        out.append((prefix, json.dumps(x)))
    elif isinstance(x, list):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, x))


def render(doc: dict[str, Any], fmt: str) -> str:
    """JSON (sorted keys) or CSV; tabular ``rows`` become a CSV table."""
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    rows = doc.get("result", {}).get("rows") if isinstance(doc.get("result"), dict) else None
    if rows and all(isinstance(r, dict) for r in rows):
        header = list(rows[0])
        w.writerow(header)
        for r in rows:
            w.writerow([json.dumps(r[h]) if isinstance(r[h], (dict, list)) else r[h]
                        for h in header])
    else:
        pairs: list = []
        _flatten("", doc, pairs)
        w.writerow(["key", "value"])
        w.writerows(pairs)
    return buf.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    code, doc = run(cfg)
    print(render(doc, cfg.format), end="" if cfg.format == "csv" else "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
