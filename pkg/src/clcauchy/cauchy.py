"""Cauchy problem solver.

For boundary parameters tau_P <= tau_Q the two characteristics r2 = r2(tau_P)
(from P) and r1 = r1(tau_Q) (from Q) meet at a point M.  With the
conservation pairs of :mod:`clcauchy.pairs` based at (r1(tau_Q), r2(tau_P)),
Green's theorem on the curvilinear triangle PQM gives

    M_x = x(tau_Q) - int_{tau_P}^{tau_Q} (psi x' - phi y') dtau   (x-pair)
    M_y = y(tau_Q) - int_{tau_P}^{tau_Q} (psi x' - phi y') dtau   (y-pair)

Targets are indexed by (tau_P, tau_Q) rather than by invariant values, so
constant-state and simple-wave arcs, where the invariant map is not
injective, need no special treatment.
"""

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import (AccuracyError, AmbiguityError, ConfigError, CurveError, DomainError,
                     RangeError, SolverError)
from .pairs import ProblemKind, pair_arrays
from .specfun import quad_batch
from .systems import PhysicalState

__all__ = [
    "BoundaryCurve",
    "InvariantProfile",
    "SolvedPoint",
    "Polyline",
    "FieldReport",
    "CharacteristicField",
    "ParameterLocation",
    "boundary_invariants",
    "profile_boundary",
    "solve_point",
    "solve_points",
    "build_field",
    "locate_parameters",
    "insert_fans",
    "tabulated_curve",
    "straight_line_curve",
]

DEFAULT_SOLVE_TOL = 1e-9
DEFAULT_MARGIN = 1e-6
_CHUNK = 128


@dataclass(frozen=True)
class BoundaryCurve:
    """Initial curve with Cauchy data.

    ``position(tau) -> (x, y)``, ``data(tau) -> (u, v)`` and the optional
    ``derivative(tau) -> (x', y')`` are vectorized in tau.  ``invariants``,
    when given, returns (r1, r2) directly and takes precedence over mapping
    ``data`` through the system (used for unwrapped angles and fans).
    """

    position: Callable
    data: Callable
    param_range: tuple
    breakpoints: tuple = ()
    derivative: Optional[Callable] = None
    invariants: Optional[Callable] = None
    name: str = ""

    def __post_init__(self):
        a, b = self.param_range
        if not a < b:
            raise ConfigError("param_range must satisfy a < b")
        bps = tuple(sorted(float(t) for t in self.breakpoints))
        if any(not a <= t <= b for t in bps):
            raise ConfigError("breakpoints must lie inside param_range")
        object.__setattr__(self, "breakpoints", bps)

    def tangent(self, tau):
        tau = np.asarray(tau, dtype=float)
        if self.derivative is not None:
            return self.derivative(tau)
        # five-point stencil, fallback for curves without exact derivatives
        h = 1e-3 * (self.param_range[1] - self.param_range[0])
        p2 = np.asarray(self.position(tau + 2 * h))
        p1 = np.asarray(self.position(tau + h))
        m1 = np.asarray(self.position(tau - h))
        m2 = np.asarray(self.position(tau - 2 * h))
        d = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h)
        return d[0], d[1]


@dataclass(frozen=True)
class InvariantProfile:
    """Invariant traces sampled along a boundary curve."""

    samples: tuple                 # ((tau, r1, r2), ...)
    monotone_r1: bool
    monotone_r2: bool
    evaluate: Callable = field(repr=False, compare=False, default=None)

    @property
    def tau(self):
        return np.array([s[0] for s in self.samples])

    @property
    def r1(self):
        return np.array([s[1] for s in self.samples])

    @property
    def r2(self):
        return np.array([s[2] for s in self.samples])


@dataclass(frozen=True)
class SolvedPoint:
    x: float
    y: float
    r1: float
    r2: float
    state: Optional[PhysicalState]
    tau_p: float
    tau_q: float


@dataclass(frozen=True)
class Polyline:
    """One characteristic: ``tau`` is the constant boundary parameter."""

    tau: float
    labels: tuple                  # ((tau_p, tau_q), ...) in marching order
    vertices: tuple                # SolvedPoint or None (failed vertex)

    def segments(self):
        """Runs of consecutive solved vertices (gaps split the line)."""
        runs, cur = [], []
        for v in self.vertices:
            if v is None:
                if cur:
                    runs.append(cur)
                cur = []
            else:
                cur.append(v)
        if cur:
            runs.append(cur)
        return runs


@dataclass(frozen=True)
class FieldReport:
    errors: dict                   # (tau_p, tau_q) -> message
    foldovers: tuple               # labels of grid cells with flipped orientation


@dataclass(frozen=True)
class CharacteristicField:
    family1: tuple
    family2: tuple
    report: FieldReport
    boundary: tuple = ()           # sampled boundary (x, y) for plotting
    system: str = ""

    def points(self):
        """Unique solved vertices in grid order."""
        seen, out = set(), []
        for line in self.family1 + self.family2:
            for lab, v in zip(line.labels, line.vertices):
                if v is not None and lab not in seen:
                    seen.add(lab)
                    out.append(v)
        return out


class ParameterLocation(NamedTuple):
    tau_p: float
    tau_q: float
    multiple_p: bool
    multiple_q: bool


# Boundary invariants ----------------------------------------------------------

def boundary_invariants(sys, curve, tau):
    """(r1, r2) of the boundary data at parameters ``tau`` (array)."""
    tau = np.asarray(tau, dtype=float)
    if curve.invariants is not None:
        return curve.invariants(tau)
    u, v = curve.data(tau)
    u = np.broadcast_to(np.asarray(u, dtype=float), tau.shape)
    v = np.broadcast_to(np.asarray(v, dtype=float), tau.shape)
    ok = sys.state_ok(u, v)
    if not np.all(ok):
        bad = float(np.ravel(tau)[np.nonzero(~np.ravel(ok))[0][0]])
        raise DomainError(f"boundary data inadmissible at tau = {bad!r}: {sys.state_constraint}")
    with np.errstate(all="ignore"):
        r1, r2 = sys.to_inv(u, v)
    return np.asarray(r1, dtype=float), np.asarray(r2, dtype=float)


def profile_boundary(sys, curve, n):
    """Sample the invariant traces at ``n`` points plus every breakpoint."""
    if n < 2:
        raise ConfigError("profile needs n >= 2")
    a, b = curve.param_range
    tau = np.union1d(np.linspace(a, b, n), np.array(curve.breakpoints, dtype=float))
    r1, r2 = boundary_invariants(sys, curve, tau)

    def strictly_monotone(r):
        d = np.diff(r)
        return bool(np.all(d > 0) or np.all(d < 0))

    samples = tuple((float(t), float(x), float(y)) for t, x, y in zip(tau, r1, r2))

    def evaluate(t):
        x, y = boundary_invariants(sys, curve, np.asarray(t, dtype=float))
        return x, y

    return InvariantProfile(samples, strictly_monotone(r1), strictly_monotone(r2), evaluate)


def _locate_one(tau, r, target, fn, name):
    scale = max(1.0, abs(target))
    tol = 1e-10 * scale
    d = r - target
    close = np.abs(d) <= tol
    roots, segments = [], []
    i = 0
    n = tau.size
    while i < n:
        if close[i]:
            j = i
            while j + 1 < n and close[j + 1]:
                j += 1
            if j > i:
                segments.append((float(tau[i]), float(tau[j])))
            else:
                roots.append(float(tau[i]))
            i = j + 1
            continue
        if i + 1 < n and not close[i + 1] and d[i] * d[i + 1] < 0:
            lo, hi = float(tau[i]), float(tau[i + 1])
            root = brentq(lambda t: float(fn(t)) - target, lo, hi, xtol=1e-15,
                          rtol=4 * np.finfo(float).eps, maxiter=200)
            if abs(float(fn(root)) - target) > tol:
                raise RangeError(f"{name} = {target!r}: bisection could not reach 1e-10")
            roots.append(root)
        i += 1
    found = len(roots) + len(segments)
    if found == 0:
        raise RangeError(f"{name} = {target!r} is not attained on the boundary")
    if found > 1:
        listing = roots + [0.5 * (s + e) for s, e in segments]
        raise AmbiguityError(f"{name} = {target!r} attained at several parameters: {sorted(listing)}",
                             roots=sorted(listing))
    if segments:
        s, e = segments[0]
        return 0.5 * (s + e), True
    return roots[0], False


def locate_parameters(profile, base):
    """Boundary parameters (tau_P, tau_Q) with r2(tau_P) = r2_0 and r1(tau_Q) = r1_0."""
    tau = profile.tau

    def f1(t):
        return profile.evaluate(np.array([t]))[0][0]

    def f2(t):
        return profile.evaluate(np.array([t]))[1][0]

    tq, mq = _locate_one(tau, profile.r1, base.r1_0, f1, "r1")
    tp, mp = _locate_one(tau, profile.r2, base.r2_0, f2, "r2")
    return ParameterLocation(tp, tq, mp, mq)


# Solver --------------------------------------------------------------------

@dataclass
class _Batch:
    """Outcome of one batched solve: arrays plus per-target errors."""

    x: np.ndarray
    y: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    errors: dict


def _solve_batch(sys, curve, tau_p, tau_q, tol, margin, fault=None):
    """Solve all targets in one vectorized pass; raises on any failure."""
    m = tau_p.size
    b1 = boundary_invariants(sys, curve, tau_q)[0]
    b2 = boundary_invariants(sys, curve, tau_p)[1]
    if not np.all(sys.eigen_ok(b1, b2)):
        raise DomainError(f"base point inadmissible: {sys.point_constraint}")

    # rows: (target, kind, sub-interval), ordered target-major
    lo, hi, tgt, knd = [], [], [], []
    bps = np.array(curve.breakpoints, dtype=float)
    for i in range(m):
        p, q = float(tau_p[i]), float(tau_q[i])
        cuts = [p] + [float(t) for t in bps if p < t < q] + [q]
        for k in (0, 1):
            for s in range(len(cuts) - 1):
                lo.append(cuts[s])
                hi.append(cuts[s + 1])
                tgt.append(i)
                knd.append(k)
    lo, hi = np.array(lo), np.array(hi)
    tgt, knd = np.array(tgt, dtype=np.int64), np.array(knd, dtype=np.int64)
    worst_margin = np.full(m, np.inf)

    def integrand(t, rows):
        shape = t.shape
        flat = t.reshape(-1)
        xd, yd = curve.tangent(flat)
        xd = np.broadcast_to(np.asarray(xd, dtype=float), flat.shape)
        yd = np.broadcast_to(np.asarray(yd, dtype=float), flat.shape)
        r1, r2 = boundary_invariants(sys, curve, flat)
        rr = np.repeat(rows, shape[1])
        targets = tgt[rr]
        kinds = knd[rr]
        speed = np.hypot(xd, yd)
        moving = speed > 0
        if np.any(moving):
            a1, a2 = sys.angles(r1, r2)
            ang = np.arctan2(yd, xd)
            gap = np.minimum(np.abs(np.sin(ang - a1)), np.abs(np.sin(ang - a2)))
            gap = np.where(moving, gap, np.inf)
            np.minimum.at(worst_margin, targets, gap)
        out = np.empty(flat.shape)
        for k, kind in ((0, ProblemKind.X), (1, ProblemKind.Y)):
            sel = kinds == k
            if not sel.any():
                continue
            phi, psi = pair_arrays(sys, kind, r1[sel], r2[sel], b1[targets[sel]], b2[targets[sel]])
            if fault is not None:
                phi, psi = fault(kind, phi, psi)
            out[sel] = psi * xd[sel] - phi * yd[sel]
        return out.reshape(shape)

    vals, errs, _, failed = quad_batch(integrand, lo, hi, tol)
    errors = {}
    integral = np.zeros((m, 2))
    for row in range(lo.size):       # fixed accumulation order per target
        integral[tgt[row], knd[row]] += vals[row]
        if failed[row]:
            errors.setdefault(int(tgt[row]), AccuracyError(
                f"arc quadrature did not converge (est. error {errs[row]:.3g})",
                est_error=float(errs[row])))
    for i in np.nonzero(worst_margin <= margin)[0]:
        errors.setdefault(int(i), CurveError(
            f"boundary is characteristic within margin {margin:g} on the arc"))
    xq, yq = curve.position(tau_q)
    xq = np.broadcast_to(np.asarray(xq, dtype=float), tau_q.shape)
    yq = np.broadcast_to(np.asarray(yq, dtype=float), tau_q.shape)
    return _Batch(xq - integral[:, 0], yq - integral[:, 1], b1, b2, errors)


def _solve_isolating(sys, curve, tau_p, tau_q, tol, margin, fault):
    """Batched solve that pins failures on individual targets.

    A failing batch is split in halves until the failure is isolated; since
    every target is computed independently of its batch mates the results
    do not depend on the splitting.
    """
    try:
        return _solve_batch(sys, curve, tau_p, tau_q, tol, margin, fault)
    except SolverError as exc:
        if tau_p.size == 1:
            nan = np.array([np.nan])
            return _Batch(nan, nan.copy(), nan.copy(), nan.copy(), {0: exc})
        h = tau_p.size // 2
        left = _solve_isolating(sys, curve, tau_p[:h], tau_q[:h], tol, margin, fault)
        right = _solve_isolating(sys, curve, tau_p[h:], tau_q[h:], tol, margin, fault)
        errors = dict(left.errors)
        errors.update({k + h: v for k, v in right.errors.items()})
        return _Batch(*(np.concatenate([getattr(left, f), getattr(right, f)])
                        for f in ("x", "y", "b1", "b2")), errors)


def _state_or_none(sys, r1, r2):
    if not sys.point_ok(np.float64(r1), np.float64(r2)):
        return None
    with np.errstate(all="ignore"):
        u, v = sys.from_inv(np.float64(r1), np.float64(r2))
    if not (np.isfinite(u) and np.isfinite(v)):
        return None
    return PhysicalState(float(u), float(v))


def solve_points(sys, curve, tau_p, tau_q, tol=DEFAULT_SOLVE_TOL, margin=DEFAULT_MARGIN,
                 fault=None):
    """Solve many targets; returns a list of SolvedPoint or exception objects.

    ``fault`` is a test hook ``fault(kind, phi, psi) -> (phi, psi)`` applied
    to the pair values inside the arc integrand.
    """
    tau_p = np.atleast_1d(np.asarray(tau_p, dtype=float))
    tau_q = np.atleast_1d(np.asarray(tau_q, dtype=float))
    a, b = curve.param_range
    if tau_p.shape != tau_q.shape:
        raise ConfigError("tau_p and tau_q must have the same shape")
    results = [None] * tau_p.size
    todo = []
    for i, (p, q) in enumerate(zip(tau_p.tolist(), tau_q.tolist())):
        if not (a <= p <= q <= b):
            results[i] = DomainError(f"need a <= tau_p <= tau_q <= b, got ({p!r}, {q!r})")
        else:
            todo.append(i)
    todo = np.array(todo, dtype=np.int64)
    for start in range(0, todo.size, _CHUNK):
        idx = todo[start:start + _CHUNK]
        out = _solve_isolating(sys, curve, tau_p[idx], tau_q[idx], tol, margin, fault)
        for j, i in enumerate(idx):
            if j in out.errors:
                results[i] = out.errors[j]
                continue
            r1, r2 = float(out.b1[j]), float(out.b2[j])
            results[i] = SolvedPoint(float(out.x[j]), float(out.y[j]), r1, r2,
                                     _state_or_none(sys, r1, r2),
                                     float(tau_p[i]), float(tau_q[i]))
    return results


def solve_point(sys, curve, profile, tau_p, tau_q, tol=DEFAULT_SOLVE_TOL, margin=DEFAULT_MARGIN):
    """Intersection point M of the characteristics from P = tau_p and Q = tau_q.

    ``profile`` is accepted for interface symmetry with
    :func:`locate_parameters`; the solver evaluates the boundary directly.
    """
    res = solve_points(sys, curve, [tau_p], [tau_q], tol, margin)[0]
    if isinstance(res, Exception):
        raise res
    return res


# Field assembly ----------------------------------------------------------------

def _grid_labels(a, b, n1, n2):
    tq = np.linspace(a, b, n1)
    tp = np.linspace(a, b, n2)
    fam1, fam2 = [], []
    for q in tq:
        labs = [(float(q), float(q))] + [(float(p), float(q)) for p in tp[::-1] if p < q]
        fam1.append((float(q), labs))
    for p in tp:
        labs = [(float(p), float(p))] + [(float(p), float(q)) for q in tq if q > p]
        fam2.append((float(p), labs))
    return tp, tq, fam1, fam2


def _signed_area(p00, p10, p01, p11):
    return ((p11[0] - p00[0]) * (p01[1] - p10[1]) - (p11[1] - p00[1]) * (p01[0] - p10[0]))


def _foldovers(tp, tq, solved):
    areas = {}
    for i in range(tp.size - 1):
        for j in range(tq.size - 1):
            corners = [(tp[i], tq[j]), (tp[i + 1], tq[j]), (tp[i], tq[j + 1]), (tp[i + 1], tq[j + 1])]
            if not all(c[0] <= c[1] for c in corners):
                continue
            pts = [solved.get((float(c[0]), float(c[1]))) for c in corners]
            if any(p is None for p in pts):
                continue
            ar = _signed_area(*[(p.x, p.y) for p in pts])
            if ar != 0.0:
                areas[(float(tp[i]), float(tq[j]))] = ar
    if not areas:
        return ()
    majority = 1.0 if sum(1 for v in areas.values() if v > 0) >= len(areas) / 2 else -1.0
    return tuple(sorted(k for k, v in areas.items() if v * majority < 0))


def build_field(sys, curve, n1, n2, tol=DEFAULT_SOLVE_TOL, margin=DEFAULT_MARGIN,
                tau_range=None):
    """Characteristic field on the (tau_P, tau_Q) grid.

    Family-1 polylines (constant tau_Q, hence constant r1) use ``n1`` values
    of tau_Q; family-2 polylines (constant tau_P) use ``n2`` values of tau_P.
    Both start at the boundary point.  Failed vertices are kept as ``None``
    with the reason in ``report.errors``.
    """
    if n1 < 2 or n2 < 2:
        raise ConfigError("grid sizes n1, n2 must be >= 2")
    a, b = tau_range if tau_range is not None else curve.param_range
    tp, tq, fam1, fam2 = _grid_labels(a, b, n1, n2)
    labels = sorted({lab for _, labs in fam1 + fam2 for lab in labs}, key=lambda l: (l[1], l[0]))
    res = solve_points(sys, curve, [l[0] for l in labels], [l[1] for l in labels], tol, margin)
    solved, errors = {}, {}
    for lab, r in zip(labels, res):
        if isinstance(r, Exception):
            errors[lab] = f"{type(r).__name__}: {r}"
        else:
            solved[lab] = r
    family1 = tuple(Polyline(t, tuple(labs), tuple(solved.get(l) for l in labs)) for t, labs in fam1)
    family2 = tuple(Polyline(t, tuple(labs), tuple(solved.get(l) for l in labs)) for t, labs in fam2)
    s = np.linspace(*curve.param_range, 401)
    bx, by = curve.position(s)
    boundary = tuple(zip(np.broadcast_to(bx, s.shape).tolist(), np.broadcast_to(by, s.shape).tolist()))
    report = FieldReport(errors, _foldovers(tp, tq, solved))
    return CharacteristicField(family1, family2, report, boundary, sys.name)


# Curve constructors ------------------------------------------------------------

def straight_line_curve(p0, p1, data, param_range=(0.0, 1.0), name="line"):
    """Segment from p0 (tau = a) to p1 (tau = b) with data ``data(tau) -> (u, v)``."""
    a, b = param_range
    (x0, y0), (x1, y1) = p0, p1
    dx, dy = (x1 - x0) / (b - a), (y1 - y0) / (b - a)

    def position(t):
        t = np.asarray(t, dtype=float)
        return x0 + dx * (t - a), y0 + dy * (t - a)

    def derivative(t):
        t = np.asarray(t, dtype=float)
        return np.full(t.shape, dx), np.full(t.shape, dy)

    return BoundaryCurve(position, data, (a, b), (), derivative, None, name)


def tabulated_curve(tau, x, y, u, v, breakpoints=(), name="tabulated"):
    """Curve from samples, cubic splines on each piece between breakpoints."""
    tau = np.asarray(tau, dtype=float)
    if tau.ndim != 1 or tau.size < 2 or np.any(np.diff(tau) <= 0):
        raise ConfigError("tabulated tau must be strictly increasing with >= 2 samples")
    cols = [np.asarray(c, dtype=float) for c in (x, y, u, v)]
    if any(c.shape != tau.shape for c in cols):
        raise ConfigError("tabulated columns must have equal length")
    edges = [tau[0]] + [float(t) for t in sorted(breakpoints) if tau[0] < t < tau[-1]] + [tau[-1]]
    pieces = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (tau >= lo) & (tau <= hi)
        if sel.sum() < 2:
            raise ConfigError("each piece between breakpoints needs >= 2 samples")
        kind = "not-a-knot" if sel.sum() >= 4 else "natural"
        pieces.append((lo, hi, [CubicSpline(tau[sel], c[sel], bc_type=kind) for c in cols]))

    def piecewise(t, col, nu=0):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape)
        idx = np.searchsorted(np.array(edges[1:-1]), t, side="right")
        for k, (_, _, splines) in enumerate(pieces):
            sel = idx == k
            if np.any(sel):
                out[sel] = splines[col](t[sel], nu)
        return out

    return BoundaryCurve(
        position=lambda t: (piecewise(t, 0), piecewise(t, 1)),
        data=lambda t: (piecewise(t, 2), piecewise(t, 3)),
        param_range=(float(tau[0]), float(tau[-1])),
        breakpoints=tuple(edges[1:-1]),
        derivative=lambda t: (piecewise(t, 0, 1), piecewise(t, 1, 1)),
        name=name,
    )


def insert_fans(sys, curve, width=None, side_eps=1e-12):
    """Insert centred fans at data jumps on breakpoints.

    Every breakpoint where the invariants jump is widened into a parameter
    interval on which the position is frozen at the corner and (r1, r2) run
    linearly from the left to the right limit.  Returns a new curve whose
    invariants are given explicitly.
    """
    a, b = curve.param_range
    span = b - a
    width = 0.05 * span if width is None else float(width)
    jumps = []
    for t in curve.breakpoints:
        if not a < t < b:
            continue
        h = side_eps * max(1.0, abs(t)) * 1e3
        left = boundary_invariants(sys, curve, np.array([t - h]))
        right = boundary_invariants(sys, curve, np.array([t + h]))
        jl = np.array([left[0][0], left[1][0]])
        jr = np.array([right[0][0], right[1][0]])
        if np.max(np.abs(jr - jl)) > 1e-6:
            jumps.append((t, jl, jr))
    if not jumps:
        return curve
    starts = []
    shift = 0.0
    for t, jl, jr in jumps:
        starts.append((t + shift, t + shift + width, t, jl, jr))
        shift += width

    def to_original(s):
        s = np.asarray(s, dtype=float)
        t = s.copy()
        fan = np.full(s.shape, -1)
        for k, (s0, s1, t0, _, _) in enumerate(starts):
            before = sum(w[1] - w[0] for w in starts[:k])
            inside = (s >= s0) & (s <= s1)
            after = s > s1
            t = np.where(inside, t0, t)
            fan = np.where(inside, k, fan)
            t = np.where(after, s - before - (s1 - s0), t)
        return t, fan

    def position(s):
        t, _ = to_original(s)
        return curve.position(t)

    def derivative(s):
        t, fan = to_original(s)
        xd, yd = curve.tangent(t)
        xd = np.where(fan >= 0, 0.0, xd)
        yd = np.where(fan >= 0, 0.0, yd)
        return xd, yd

    def invariants(s):
        t, fan = to_original(s)
        r1, r2 = boundary_invariants(sys, curve, t)
        r1, r2 = np.array(r1, dtype=float), np.array(r2, dtype=float)
        for k, (s0, s1, _, jl, jr) in enumerate(starts):
            sel = fan == k
            if np.any(sel):
                w = (np.asarray(s)[sel] - s0) / (s1 - s0)
                r1[sel] = jl[0] + w * (jr[0] - jl[0])
                r2[sel] = jl[1] + w * (jr[1] - jl[1])
        return r1, r2

    def data(s):
        r1, r2 = invariants(s)
        with np.errstate(all="ignore"):
            return sys.from_inv(r1, r2)

    bps = []
    for s0, s1, _, _, _ in starts:
        bps += [s0, s1]
    for t in curve.breakpoints:
        if all(t != j[0] for j in jumps):
            bps.append(t + sum(s1 - s0 for s0, s1, t0, _, _ in starts if t0 < t))
    return BoundaryCurve(position, data, (a, b + shift), tuple(sorted(set(bps))),
                         derivative, invariants, curve.name + "+fans")
