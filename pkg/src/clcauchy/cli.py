"""Command-line front end.

Subcommands: ``solve``, ``field``, ``validate``, ``oracle-compare`` and
``scenarios``.  Settings come from flags or a JSON ``--config`` file, with
flags taking precedence.  Exit status is 0 on success, 1 on configuration
errors and 2 on numerical failures; failures also print a one-line JSON
report on stderr.
"""

from dataclasses import dataclass, field as dc_field
import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import laplace
from .cauchy import (DEFAULT_SOLVE_TOL, build_field, locate_parameters, profile_boundary,
                     solve_points, tabulated_curve)
from .errors import ConfigError, SolverError
from .oracle import compare, convergence_ratios, moc_march
from .pairs import BasePoint
from .scenarios import SCENARIOS, scenario
from .systems import RiemannPoint, SYSTEM_NAMES, make_system, sample_states

__all__ = ["RunConfig", "load_config", "run", "main", "emit_csv", "emit_json", "emit_svg",
           "read_field_csv", "FIELD_HEADER"]

FIELD_HEADER = ("family", "curve_index", "vertex_index", "tau_p", "tau_q",
                "x", "y", "r1", "r2", "u", "v")
FORMATS = ("csv", "json", "svg")
_SYSTEM_FLAGS = ("gamma", "k", "alpha", "chi0", "tau0")


@dataclass
class RunConfig:
    command: str
    system: str = None
    system_params: dict = dc_field(default_factory=dict)
    scenario: str = None
    scenario_params: dict = dc_field(default_factory=dict)
    boundary_file: str = None
    breakpoints: tuple = ()
    n1: int = 40
    n2: int = 40
    tau_range: tuple = None
    tau_p: float = None
    tau_q: float = None
    base: tuple = None
    quad_tol: float = DEFAULT_SOLVE_TOL
    fd_step: float = 1e-5
    n0: tuple = (50, 100, 200)
    closure: str = "trapezoid"
    fmt: str = None
    out: str = None

    def validate(self):
        if not (self.quad_tol > 0 and self.fd_step > 0):
            raise ConfigError("tolerances must be positive")
        if self.n1 < 2 or self.n2 < 2:
            raise ConfigError("grid sizes n1, n2 must be >= 2")
        if self.boundary_file is not None and not os.path.isfile(self.boundary_file):
            raise ConfigError(f"boundary file not found: {self.boundary_file}")
        if self.fmt is not None and self.fmt not in FORMATS:
            raise ConfigError(f"output format must be one of {FORMATS}")
        if self.system is not None and self.system.replace("-", "_") not in SYSTEM_NAMES:
            raise ConfigError(f"unknown system {self.system!r}; choose from {', '.join(SYSTEM_NAMES)}")
        if any(n < 1 for n in self.n0):
            raise ConfigError("n0 levels must be >= 1")
        return self


# Argument parsing --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _key_value(text):
    if "=" not in text:
        raise ConfigError(f"expected name=value, got {text!r}")
    key, value = text.split("=", 1)
    try:
        return key.strip(), float(value)
    except ValueError:
        return key.strip(), value.strip()


def _add_common(p):
    p.add_argument("--config", help="JSON configuration file (flags override it)")
    p.add_argument("--system", help="system name")
    p.add_argument("--scenario", help="registered scenario name")
    p.add_argument("--boundary", help="tabulated boundary CSV with header tau,x,y,u,v")
    p.add_argument("--breakpoints", type=float, nargs="*", help="breakpoints of the table")
    for flag in _SYSTEM_FLAGS:
        p.add_argument(f"--{flag}", type=float, help=f"system parameter {flag}")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                   help="extra system or scenario parameter")
    p.add_argument("--quad-tol", type=float, help="arc quadrature tolerance")
    p.add_argument("--fd-step", type=float, help="finite-difference step")
    p.add_argument("--format", dest="fmt", choices=FORMATS, help="output format")
    p.add_argument("--out", help="output path (default: stdout)")


def build_parser():
    parser = _Parser(prog="clcauchy", description="Cauchy problems via conservation laws")
    sub = parser.add_subparsers(dest="command")
    p = sub.add_parser("solve", help="intersection point for (tau_P, tau_Q)")
    _add_common(p)
    p.add_argument("--tau-p", type=float)
    p.add_argument("--tau-q", type=float)
    p.add_argument("--r1", type=float, help="locate tau_Q from r1 instead of --tau-q")
    p.add_argument("--r2", type=float, help="locate tau_P from r2 instead of --tau-p")
    p = sub.add_parser("field", help="characteristic field on a (tau_P, tau_Q) grid")
    _add_common(p)
    p.add_argument("--n1", type=int)
    p.add_argument("--n2", type=int)
    p.add_argument("--tau-range", type=float, nargs=2)
    p = sub.add_parser("validate", help="Laplace and pair checks for a system")
    _add_common(p)
    p = sub.add_parser("oracle-compare", help="compare the solver with the marching oracle")
    _add_common(p)
    p.add_argument("--n0", type=int, nargs="+")
    p.add_argument("--closure", choices=("trapezoid", "euler"))
    p = sub.add_parser("scenarios", help="list registered scenarios")
    _add_common(p)
    return parser


def _from_file(path):
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    out = {}
    system = data.get("system")
    if isinstance(system, str):
        out["system"] = system
    elif isinstance(system, dict):
        out["system"] = system.get("name")
        out["system_params"] = dict(system.get("params", {}))
    boundary = data.get("boundary", {})
    if isinstance(boundary, str):
        boundary = {"scenario": boundary}
    if "scenario" in boundary:
        out["scenario"] = boundary["scenario"]
        out["scenario_params"] = dict(boundary.get("params", {}))
    if "file" in boundary:
        out["boundary_file"] = boundary["file"]
        out["breakpoints"] = tuple(boundary.get("breakpoints", ()))
    grid = data.get("grid", {})
    for key in ("n1", "n2"):
        if key in grid:
            out[key] = int(grid[key])
    if "tau_range" in grid:
        out["tau_range"] = tuple(grid["tau_range"])
    tol = data.get("tolerances", {})
    if "quad" in tol:
        out["quad_tol"] = float(tol["quad"])
    if "fd" in tol:
        out["fd_step"] = float(tol["fd"])
    output = data.get("output", {})
    if "format" in output:
        out["fmt"] = output["format"]
    if "path" in output:
        out["out"] = output["path"]
    for key in ("tau_p", "tau_q", "closure"):
        if key in data:
            out[key] = data[key]
    if "n0" in data:
        out["n0"] = tuple(int(n) for n in data["n0"])
    if "base" in data:
        out["base"] = tuple(float(b) for b in data["base"])
    return out


def load_config(argv):
    """Parse argv (and an optional JSON file) into a validated RunConfig."""
    args = build_parser().parse_args(argv)
    if args.command is None:
        raise ConfigError("a subcommand is required: solve, field, validate, oracle-compare, scenarios")
    values = _from_file(args.config) if getattr(args, "config", None) else {}
    params = dict(values.get("system_params", {}))
    for flag in _SYSTEM_FLAGS:
        if getattr(args, flag, None) is not None:
            params[flag] = getattr(args, flag)
    for item in args.param:
        key, value = _key_value(item)
        params[key] = value
    if args.scenario is not None:
        values["scenario"] = args.scenario
        values.pop("boundary_file", None)
    if args.boundary is not None:
        values["boundary_file"] = args.boundary
        values.pop("scenario", None)
    if args.breakpoints is not None:
        values["breakpoints"] = tuple(args.breakpoints)
    if args.system is not None:
        values["system"] = args.system
    direct = {"quad_tol": args.quad_tol, "fd_step": args.fd_step, "fmt": args.fmt, "out": args.out}
    for name in ("tau_p", "tau_q", "n1", "n2", "closure"):
        direct[name] = getattr(args, name, None)
    if getattr(args, "tau_range", None) is not None:
        direct["tau_range"] = tuple(args.tau_range)
    if getattr(args, "n0", None) is not None:
        direct["n0"] = tuple(args.n0)
    if getattr(args, "r1", None) is not None or getattr(args, "r2", None) is not None:
        direct["base"] = (args.r1, args.r2)
    values.update({k: v for k, v in direct.items() if v is not None})
    if values.get("scenario") is not None:
        # system parameters of a scenario are passed as scenario overrides
        values["scenario_params"] = {**values.get("scenario_params", {}), **params}
        values.pop("system_params", None)
    else:
        values["system_params"] = params
    cfg = RunConfig(command=args.command, **{k: v for k, v in values.items()
                                             if k in RunConfig.__dataclass_fields__})
    if cfg.fmt is None and cfg.out:
        ext = os.path.splitext(cfg.out)[1].lower().lstrip(".")
        cfg.fmt = ext if ext in FORMATS else None
    return cfg.validate()


# Problem assembly --------------------------------------------------------------

def _read_boundary(path, breakpoints):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header != ["tau", "x", "y", "u", "v"]:
            raise ConfigError("boundary CSV header must be tau,x,y,u,v")
        rows = [[float(v) for v in row] for row in reader if row]
    if len(rows) < 2:
        raise ConfigError("boundary CSV needs at least two rows")
    cols = np.array(rows, dtype=float).T
    return tabulated_curve(*cols, breakpoints=breakpoints, name=os.path.basename(path))


def problem(cfg):
    """(system, curve) described by a RunConfig."""
    if cfg.scenario is not None:
        return scenario(cfg.scenario, **cfg.scenario_params)
    if cfg.boundary_file is not None:
        if cfg.system is None:
            raise ConfigError("--boundary needs --system")
        return make_system(cfg.system, **cfg.system_params), _read_boundary(cfg.boundary_file,
                                                                              cfg.breakpoints)
    raise ConfigError("give --scenario or --boundary")


# Serialization -----------------------------------------------------------------

def _num(x):
    return "" if x is None else repr(float(x))


def _vertex_dict(v):
    if v is None:
        return None
    return {"tau_p": v.tau_p, "tau_q": v.tau_q, "x": v.x, "y": v.y, "r1": v.r1, "r2": v.r2,
            "u": None if v.state is None else v.state.u,
            "v": None if v.state is None else v.state.v}


def emit_csv(fld, stream):
    """Field as CSV rows; failed vertices are omitted (their index is skipped)."""
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(FIELD_HEADER)
    for fam, lines in ((1, fld.family1), (2, fld.family2)):
        for ci, line in enumerate(lines):
            for vi, v in enumerate(line.vertices):
                if v is None:
                    continue
                u = v.state.u if v.state is not None else None
                vv = v.state.v if v.state is not None else None
                w.writerow([fam, ci, vi, _num(v.tau_p), _num(v.tau_q), _num(v.x), _num(v.y),
                            _num(v.r1), _num(v.r2), _num(u), _num(vv)])


def read_field_csv(stream):
    """Parse rows written by :func:`emit_csv` into dicts of floats (None for blanks)."""
    reader = csv.DictReader(stream)
    rows = []
    for row in reader:
        rec = {}
        for k in FIELD_HEADER:
            val = row[k]
            if k in ("family", "curve_index", "vertex_index"):
                rec[k] = int(val)
            else:
                rec[k] = float(val) if val != "" else None
        rows.append(rec)
    return rows


def field_to_json(fld):
    return {
        "system": fld.system,
        "family1": [{"tau_q": l.tau, "vertices": [_vertex_dict(v) for v in l.vertices]}
                    for l in fld.family1],
        "family2": [{"tau_p": l.tau, "vertices": [_vertex_dict(v) for v in l.vertices]}
                    for l in fld.family2],
        "report": {
            "errors": [{"tau_p": k[0], "tau_q": k[1], "message": m}
                       for k, m in sorted(fld.report.errors.items())],
            "foldovers": [list(k) for k in fld.report.foldovers],
        },
    }


def emit_json(obj, stream):
    json.dump(obj, stream, indent=1, sort_keys=False, allow_nan=False)
    stream.write("\n")


def _svg_number(v):
    return f"{v:.6f}".rstrip("0").rstrip(".") if v != 0 else "0"


def render_svg(fld, width=800):
    """SVG text for a field: one polyline per characteristic, boundary as a path."""
    pts = fld.points()
    if not pts:
        raise ConfigError("field has no solved vertices; nothing to draw")
    xs = [p.x for p in pts] + [b[0] for b in fld.boundary]
    ys = [p.y for p in pts] + [b[1] for b in fld.boundary]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-12)
    mx, my = 0.05 * max(x1 - x0, span * 1e-3), 0.05 * max(y1 - y0, span * 1e-3)
    vb = (x0 - mx, -(y1 + my), (x1 - x0) + 2 * mx, (y1 - y0) + 2 * my)
    height = int(round(width * vb[3] / vb[2])) if vb[2] > 0 else width
    stroke = _svg_number(span / 800)
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{max(height, 1)}" '
           f'viewBox="{" ".join(_svg_number(v) for v in vb)}">',
           f"<style>polyline, path {{ fill: none; stroke-width: {stroke}; }} "
           ".family1 { stroke: #1f5fbf; } .family2 { stroke: #c0392b; } "
           ".boundary { stroke: #000000; }</style>"]
    for cls, lines in (("family1", fld.family1), ("family2", fld.family2)):
        for line in lines:
            for run in line.segments():
                coords = " ".join(f"{_svg_number(v.x)},{_svg_number(-v.y)}" for v in run)
                out.append(f'<polyline class="{cls}" points="{coords}"/>')
    if fld.boundary:
        d = " ".join(("M" if i == 0 else "L") + f"{_svg_number(x)},{_svg_number(-y)}"
                     for i, (x, y) in enumerate(fld.boundary))
        out.append(f'<path class="boundary" d="{d}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(fld, path):
    """Write the SVG; nothing is written when the field is empty."""
    text = render_svg(fld)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _write(cfg, text):
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# Commands ------------------------------------------------------------------------

def _cmd_solve(cfg):
    sysd, curve = problem(cfg)
    tp, tq = cfg.tau_p, cfg.tau_q
    if cfg.base is not None:
        prof = profile_boundary(sysd, curve, 401)
        r1, r2 = cfg.base
        if r1 is None or r2 is None:
            raise ConfigError("locating parameters needs both --r1 and --r2")
        loc = locate_parameters(prof, BasePoint(r1, r2))
        tp, tq = loc.tau_p, loc.tau_q
    if tp is None or tq is None:
        raise ConfigError("solve needs --tau-p and --tau-q (or --r1 and --r2)")
    a, b = curve.param_range
    if not a <= tp <= tq <= b:
        raise ConfigError(f"need {a!r} <= tau_p <= tau_q <= {b!r}, got ({tp!r}, {tq!r})")
    res = solve_points(sysd, curve, [tp], [tq], cfg.quad_tol)[0]
    if isinstance(res, Exception):
        raise res
    buf = io.StringIO()
    emit_json(_vertex_dict(res), buf)
    _write(cfg, buf.getvalue())


def _cmd_field(cfg):
    sysd, curve = problem(cfg)
    fld = build_field(sysd, curve, cfg.n1, cfg.n2, cfg.quad_tol, tau_range=cfg.tau_range)
    fmt = cfg.fmt or "csv"
    if fmt == "svg":
        if not cfg.out:
            raise ConfigError("svg output needs --out")
        emit_svg(fld, cfg.out)
    else:
        buf = io.StringIO()
        if fmt == "csv":
            emit_csv(fld, buf)
        else:
            emit_json(field_to_json(fld), buf)
        _write(cfg, buf.getvalue())
    if fld.report.errors:
        sys.stderr.write(json.dumps({"warning": "failed vertices",
                                     "count": len(fld.report.errors)}) + "\n")


def _validation_point(sysd):
    """A fixed admissible point; for gas it has |lambda1 - lambda2| = 1."""
    if sysd.name == "gas":
        a, b = sysd.params["alpha"], sysd.params["beta"]
        return RiemannPoint(0.0, 1.0 / (a - b))
    u, v = sample_states(sysd, 1, seed=7)
    r1, r2 = sysd.to_inv(u, v)
    return RiemannPoint(float(r1[0]), float(r2[0]))


def _fmt(x):
    return f"{float(x) + 0.0:.6g}"


def validation_report(sysd, h_fd=1e-5):
    pt = _validation_point(sysd)
    lx = laplace.laplace_invariants(sysd, "eq_x", pt, h_fd)
    lp = laplace.laplace_invariants(sysd, "eq_phi", pt, h_fd)
    lines = [f"system {sysd.name} " + " ".join(f"{k}={_fmt(v)}" for k, v in sysd.params.items()),
             f"point r1={_fmt(pt.r1)} r2={_fmt(pt.r2)}"]
    if abs(lx.h - lx.k) <= 1e-6 * max(1.0, abs(lx.h)):
        lines.append(f"laplace h=k={_fmt(lx.h)}")
    else:
        lines.append(f"laplace h={_fmt(lx.h)} k={_fmt(lx.k)}")
    lines.append(f"laplace_phi h={_fmt(lp.h)} k={_fmt(lp.k)}")
    lines.append(f"cross_identity max_abs={_fmt(max(abs(lx.h - lp.k), abs(lx.k - lp.h)))}")
    lines.append(f"lambda_relation residual={_fmt(laplace.lambda_relation_residual(sysd, pt, h_fd))}")
    case = laplace.simplest_case_pairing(sysd)
    extra = ""
    if case is laplace.PairingCase.DET_CONST:
        extra = f" K={_fmt(laplace.pairing_constant(sysd))}"
    lines.append(f"pairing {case.value}{extra}")
    if sysd.name in ("gas", "born_infeld"):
        w = laplace.w_residual(sysd, laplace.closed_form_factor(sysd), pt, h_fd)
        lines.append("w_residual " + " ".join(_fmt(abs(x)) for x in w))
    return "\n".join(lines) + "\n"


def _cmd_validate(cfg):
    if cfg.system is None:
        raise ConfigError("validate needs --system")
    sysd = make_system(cfg.system, **cfg.system_params)
    _write(cfg, validation_report(sysd, cfg.fd_step))


def _cmd_oracle(cfg):
    sysd, curve = problem(cfg)
    levels = []
    for n0 in cfg.n0:
        grid = moc_march(sysd, curve, n0, cfg.closure)
        labels = [(p.tau_p, p.tau_q) for layer in grid.layers for p in layer]
        pts = solve_points(sysd, curve, [l[0] for l in labels], [l[1] for l in labels],
                           cfg.quad_tol)
        bad = [p for p in pts if isinstance(p, Exception)]
        if bad:
            raise bad[0]
        rep = compare(pts, grid)
        levels.append({"n0": n0, "max_error": rep.max_error, "mean_error": rep.mean_error,
                       "matched": rep.matched})
    ratios = convergence_ratios([l["max_error"] for l in levels])
    buf = io.StringIO()
    emit_json({"scenario": cfg.scenario, "closure": cfg.closure, "levels": levels,
               "ratios": ratios}, buf)
    _write(cfg, buf.getvalue())


def _cmd_scenarios(cfg):
    _write(cfg, "".join(f"{name}\t{desc}\n" for name, (_, desc) in SCENARIOS.items()))


_COMMANDS = {"solve": _cmd_solve, "field": _cmd_field, "validate": _cmd_validate,
             "oracle-compare": _cmd_oracle, "scenarios": _cmd_scenarios}


def _report(exc, code):
    rec = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    for attr in ("factor", "est_error", "roots"):
        val = getattr(exc, attr, None)
        if val is not None:
            rec[attr] = list(val) if isinstance(val, (tuple, list)) else val
    if isinstance(rec.get("est_error"), float) and not math.isfinite(rec["est_error"]):
        rec["est_error"] = None
    sys.stderr.write(json.dumps(rec) + "\n")
    return code


def run(argv=None):
    """Run the CLI; returns the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = load_config(argv)
        _COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        return _report(exc, 1)
    except (SolverError, ArithmeticError, ValueError) as exc:
        return _report(exc, 2)
    except OSError as exc:
        return _report(exc, 1)
    return 0


def main():
    sys.exit(run())
