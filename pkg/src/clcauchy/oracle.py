"""Marching method-of-characteristics oracle.

A Massau-type scheme on the same (tau_P, tau_Q) lattice as the solver:
boundary samples tau_0 < ... < tau_n form layer 0; node (i, j), j - i = k,
lies on layer k and is the intersection of the family-1 segment from its
parent (i + 1, j) with the family-2 segment from its parent (i, j - 1).
It carries r1 = r1(tau_j) and r2 = r2(tau_i) exactly, so only positions are
approximated.  The scheme never touches the conservation pairs.
"""

from dataclasses import dataclass
import math

import numpy as np

from .cauchy import CharacteristicField, SolvedPoint, boundary_invariants, _state_or_none
from .errors import ComparisonError, ConfigError, DegeneracyError

__all__ = ["MocGrid", "MocReport", "moc_march", "compare", "convergence_ratios"]

CLOSURES = ("trapezoid", "euler")
_PARALLEL_TOL = 1e-12


@dataclass(frozen=True)
class MocGrid:
    layers: tuple                  # layers[k][i] is node (i, i + k)
    tau: tuple
    closure: str
    n0: int


@dataclass(frozen=True)
class MocReport:
    max_error: float
    mean_error: float
    matched: int
    argmax: tuple                  # (tau_p, tau_q) of the worst node


def _direction(angle):
    return np.cos(angle), np.sin(angle)


def _mean_angle(a, b):
    # both angles describe the same family, so they differ by less than pi/2
    d = math.remainder(b - a, math.pi)
    return a + 0.5 * d


def _intersect(pa, ang_a, pb, ang_b, label):
    """Intersection of the line through pa at angle ang_a with the line through pb."""
    ca, sa = _direction(ang_a)
    cb, sb = _direction(ang_b)
    det = ca * sb - sa * cb
    if abs(det) <= _PARALLEL_TOL:
        raise DegeneracyError(f"near-parallel characteristics at node {label}")
    dx, dy = pb[0] - pa[0], pb[1] - pa[1]
    s = (dx * sb - dy * cb) / det
    return pa[0] + s * ca, pa[1] + s * sa


def moc_march(sys, curve, n0, closure="trapezoid", tau_range=None):
    """March the characteristic lattice from ``n0 + 1`` boundary samples.

    ``closure="trapezoid"`` uses the mean of the parent and node directions
    on each segment; ``closure="euler"`` uses the parent direction only.
    """
    if n0 < 1:
        raise ConfigError("n0 must be >= 1")
    if closure not in CLOSURES:
        raise ConfigError(f"closure must be one of {CLOSURES}")
    a, b = tau_range if tau_range is not None else curve.param_range
    tau = np.linspace(a, b, n0 + 1)
    r1, r2 = boundary_invariants(sys, curve, tau)
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    bx, by = curve.position(tau)
    bx = np.broadcast_to(np.asarray(bx, dtype=float), tau.shape)
    by = np.broadcast_to(np.asarray(by, dtype=float), tau.shape)

    def node(x, y, i, j):
        return SolvedPoint(float(x), float(y), float(r1[j]), float(r2[i]),
                           _state_or_none(sys, r1[j], r2[i]), float(tau[i]), float(tau[j]))

    layers = [[node(bx[i], by[i], i, i) for i in range(n0 + 1)]]
    # direction angles of node (i, j): family 1 depends on it via r2[i], r1[j]
    ang1 = {}
    ang2 = {}
    for i in range(n0 + 1):
        a1, a2 = sys.angles(r1[i], r2[i])
        ang1[(i, i)], ang2[(i, i)] = float(a1), float(a2)
    for k in range(1, n0 + 1):
        prev = layers[-1]
        cur = []
        for i in range(n0 + 1 - k):
            j = i + k
            a1, a2 = sys.angles(r1[j], r2[i])
            a1, a2 = float(a1), float(a2)
            pa = prev[i + 1]        # node (i + 1, j): shares r1
            pb = prev[i]            # node (i, j - 1): shares r2
            s1 = ang1[(i + 1, j)]
            s2 = ang2[(i, j - 1)]
            if closure == "trapezoid":
                s1 = _mean_angle(s1, a1)
                s2 = _mean_angle(s2, a2)
            x, y = _intersect((pa.x, pa.y), s1, (pb.x, pb.y), s2, (float(tau[i]), float(tau[j])))
            ang1[(i, j)], ang2[(i, j)] = a1, a2
            cur.append(node(x, y, i, j))
        layers.append(cur)
    return MocGrid(tuple(tuple(l) for l in layers), tuple(float(t) for t in tau), closure, n0)


def compare(field, grid):
    """Position discrepancy between a solver field and a marched grid.

    Nodes are matched on identical (tau_P, tau_Q) labels, which for the
    shared linspace lattice are bit-identical floats.
    """
    if isinstance(field, CharacteristicField):
        pts = field.points()
    else:
        pts = [p for p in field if p is not None]
    lookup = {(p.tau_p, p.tau_q): p for p in pts}
    errs = []
    for layer in grid.layers:
        for node in layer:
            p = lookup.get((node.tau_p, node.tau_q))
            if p is not None:
                errs.append((math.hypot(p.x - node.x, p.y - node.y), (node.tau_p, node.tau_q)))
    if not errs:
        raise ComparisonError("field and grid share no (tau_P, tau_Q) labels")
    values = np.array([e for e, _ in errs])
    worst = int(np.argmax(values))
    return MocReport(float(values.max()), float(values.mean()), len(errs), errs[worst][1])


def convergence_ratios(errors):
    """Successive ratios e[k+1]/e[k] of a discrepancy sequence."""
    e = [float(x) for x in errors]
    return [b / a if a > 0 else math.inf for a, b in zip(e[:-1], e[1:])]
