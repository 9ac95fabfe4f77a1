"""Canned boundary-value problems.

``mikhlin`` is the loaded-cavity problem of plane plasticity: a contour made
of two straight segments y = +-r and two circular caps, loaded by a uniform
normal pressure p with zero shear.  The other fixtures carry smooth or
constant Cauchy data on a straight initial line for each system.
"""

from dataclasses import dataclass
import math

import numpy as np

from .cauchy import BoundaryCurve, straight_line_curve
from .errors import ConfigError
from .systems import PhysicalState, make_system

__all__ = [
    "MikhlinParams",
    "mikhlin_contour",
    "mikhlin_tangent",
    "mikhlin_boundary_state",
    "mikhlin_solver_theta",
    "mikhlin_curve",
    "scenario",
    "scenario_names",
    "SCENARIOS",
]

VARIANTS = ("stadium", "printed")


@dataclass(frozen=True)
class MikhlinParams:
    a: float = 4.0
    r: float = 3.0
    p: float = 0.5
    k: float = 0.5

    def __post_init__(self):
        if not (self.a > 0 and self.r > 0):
            raise ConfigError("cavity needs a > 0 and r > 0")
        if not self.k > 0:
            raise ConfigError("plasticity constant k must be positive")

    @property
    def gamma_m(self):
        return math.atan(self.r / self.a)

    @property
    def sigma(self):
        # uniform normal load p with zero shear on a slip-line boundary
        return -(self.p + self.k)


# Contour ---------------------------------------------------------------------

def _reduce(t, gm):
    """Reduce t into the period window [gm - pi, gm + pi)."""
    lo = gm - math.pi
    return lo + np.mod(np.asarray(t, dtype=float) - lo, 2 * math.pi)


def _printed(prm, t):
    a, r, gm = prm.a, prm.r, prm.gamma_m
    t = _reduce(t, gm)
    x = np.empty(t.shape)
    y = np.empty(t.shape)
    dx = np.empty(t.shape)
    dy = np.empty(t.shape)
    br = np.full(t.shape, 4)
    b1 = (t >= gm - math.pi) & (t < -gm)
    b2 = (t > gm) & (t < math.pi - gm)
    b3 = (t >= -gm) & (t <= gm)
    br[b3] = 3
    br[b2] = 2
    br[b1] = 1
    with np.errstate(all="ignore"):
        cot = 1.0 / np.tan(t)
        csc2 = 1.0 / np.sin(t) ** 2
    for sel, yv in ((b1, -r), (b2, r)):
        x[sel] = -r * cot[sel]
        y[sel] = yv
        dx[sel] = r * csc2[sel]
        dy[sel] = 0.0
    w3 = math.pi / (2 * gm)
    x[b3] = r * np.cos(w3 * t[b3])
    y[b3] = r * np.sin(w3 * t[b3])
    dx[b3] = -r * w3 * np.sin(w3 * t[b3])
    dy[b3] = r * w3 * np.cos(w3 * t[b3])
    b4 = br == 4
    w4 = math.pi / (2 * (math.pi - gm))
    x[b4] = r * np.cos(w4 * t[b4]) - a
    y[b4] = r * np.sin(w4 * t[b4])
    dx[b4] = -r * w4 * np.sin(w4 * t[b4])
    dy[b4] = r * w4 * np.cos(w4 * t[b4])
    return x, y, dx, dy, br


def _stadium(prm, t):
    """Caps centred at (+-a, 0), segments y = +-r, counter-clockwise.

    Branch numbers follow the printed ones: 1 bottom, 2 top, 3 right cap,
    4 left cap.  Also returns the continuous tangent angle in the window.
    """
    a, r, gm = prm.a, prm.r, prm.gamma_m
    t = _reduce(t, gm)
    x = np.empty(t.shape)
    y = np.empty(t.shape)
    dx = np.empty(t.shape)
    dy = np.empty(t.shape)
    tan_ang = np.empty(t.shape)
    br = np.empty(t.shape, dtype=int)
    w = math.pi / (2 * gm)
    right = (t >= -gm) & (t <= gm)
    top = (t > gm) & (t < math.pi - gm)
    left = t >= math.pi - gm
    bottom = t < -gm
    with np.errstate(all="ignore"):
        cot = 1.0 / np.tan(t)
        csc2 = 1.0 / np.sin(t) ** 2
    ang = np.where(right, w * t, math.pi / 2 + w * (t - math.pi + gm))
    for sel, cx in ((right, a), (left, -a)):
        x[sel] = cx + r * np.cos(ang[sel])
        y[sel] = r * np.sin(ang[sel])
        dx[sel] = -r * w * np.sin(ang[sel])
        dy[sel] = r * w * np.cos(ang[sel])
        tan_ang[sel] = ang[sel] + math.pi / 2
    x[top] = r * cot[top]
    y[top] = r
    dx[top] = -r * csc2[top]
    dy[top] = 0.0
    tan_ang[top] = math.pi
    x[bottom] = -r * cot[bottom]
    y[bottom] = -r
    dx[bottom] = r * csc2[bottom]
    dy[bottom] = 0.0
    tan_ang[bottom] = 0.0
    br[bottom], br[top], br[right], br[left] = 1, 2, 3, 4
    return x, y, dx, dy, br, tan_ang


def mikhlin_contour(params, t, variant="printed"):
    """Contour point (x, y) and branch index at parameter t (scalar or array)."""
    if variant == "printed":
        x, y, _, _, br = _printed(params, np.asarray(t, dtype=float))
    elif variant == "stadium":
        x, y, _, _, br, _ = _stadium(params, np.asarray(t, dtype=float))
    else:
        raise ConfigError(f"variant must be one of {VARIANTS}")
    if np.ndim(t) == 0:
        return float(x), float(y), int(br)
    return x, y, br


def mikhlin_tangent(params, t, variant="printed"):
    """Exact derivative (x'(t), y'(t))."""
    if variant == "printed":
        _, _, dx, dy, _ = _printed(params, np.asarray(t, dtype=float))
    elif variant == "stadium":
        _, _, dx, dy, _, _ = _stadium(params, np.asarray(t, dtype=float))
    else:
        raise ConfigError(f"variant must be one of {VARIANTS}")
    return dx, dy


def _corners(prm):
    gm = prm.gamma_m
    return (-gm, gm, math.pi - gm, math.pi + gm)


def mikhlin_boundary_state(params, t, variant="stadium", side=1):
    """Tabulated boundary state (sigma, theta) at a scalar t.

    theta follows the four-case table: N(t) - pi/4 + pi/2 on (0, pi),
    N(t) - pi/4 + 3pi/2 on (pi, 2pi), -pi/4 at t = 0 and 3pi/4 at t = pi,
    with N(t) = arctan(y'/x').  At another branch corner the one-sided limit
    from ``side`` (+1 right, -1 left) is taken.
    """
    if side not in (1, -1):
        raise ConfigError("side must be +1 or -1")
    t = float(t)
    tm = math.fmod(t, 2 * math.pi)
    if tm < 0:
        tm += 2 * math.pi
    if tm == 0.0:
        return PhysicalState(params.sigma, -math.pi / 4)
    if tm == math.pi:
        return PhysicalState(params.sigma, 3 * math.pi / 4)
    te = t
    for c in _corners(params):
        if math.remainder(t - c, 2 * math.pi) == 0.0:
            te = t + side * 1e-9
            break
    dx, dy = mikhlin_tangent(params, np.array([te]), variant)
    n = math.atan(float(dy[0]) / float(dx[0])) if dx[0] != 0 else math.copysign(math.pi / 2, dy[0])
    shift = math.pi / 2 if tm < math.pi else 3 * math.pi / 2
    return PhysicalState(params.sigma, n - math.pi / 4 + shift)


def mikhlin_solver_theta(params, t):
    """Continuous stress angle on the stadium: tangent angle - 3pi/4.

    Equals the tabulated theta on (0, 2pi) and continues it across t = 0,
    where the table jumps by 2pi (an arctan branch cut, not a physical
    discontinuity).
    """
    t = np.asarray(t, dtype=float)
    gm = params.gamma_m
    _, _, _, _, _, tan_ang = _stadium(params, t)
    loops = np.floor((t - (gm - math.pi)) / (2 * math.pi))
    return tan_ang + 2 * math.pi * loops - 0.75 * math.pi


def mikhlin_curve(params=None, t_range=(-0.5 * math.pi, 0.5 * math.pi), variant="stadium"):
    """Plasticity system and boundary curve for the cavity problem.

    The stadium variant uses the continuous stress angle; the printed
    variant uses the tabulated theta with its own N(t) and is provided for
    auditing only (its branches do not join into a closed curve).
    """
    prm = params or MikhlinParams()
    sys = make_system("plasticity", k=prm.k)
    t0, t1 = (float(v) for v in t_range)
    if not t0 < t1:
        raise ConfigError("t_range must be increasing")
    bps = []
    for c in _corners(prm) + (0.0, math.pi):
        base = c - 2 * math.pi * math.ceil((c - t0) / (2 * math.pi))
        s = base
        while s <= t1:
            if t0 < s < t1:
                bps.append(s)
            s += 2 * math.pi
    scale = 1.0 / (2 * prm.k)

    if variant == "stadium":
        def position(t):
            x, y, _, _, _, _ = _stadium(prm, t)
            return x, y

        def derivative(t):
            return mikhlin_tangent(prm, t, "stadium")

        def theta(t):
            return mikhlin_solver_theta(prm, t)
    elif variant == "printed":
        def position(t):
            x, y, _, _, _ = _printed(prm, t)
            return x, y

        def derivative(t):
            return mikhlin_tangent(prm, t, "printed")

        def theta(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            return np.array([mikhlin_boundary_state(prm, s, "printed").v for s in t])
    else:
        raise ConfigError(f"variant must be one of {VARIANTS}")

    def data(t):
        th = theta(t)
        return np.full(np.shape(th), prm.sigma), th

    def invariants(t):
        th = theta(t)
        s = prm.sigma * scale
        return s - th, s + th

    curve = BoundaryCurve(position, data, (t0, t1), tuple(sorted(set(bps))), derivative,
                          invariants, f"mikhlin-{variant}")
    return sys, curve


# Straight-line fixtures --------------------------------------------------------

def _line_fixture(system, state_fn, param_range=(0.0, 1.0), slope=0.0, **params):
    sys = make_system(system, **params)
    a, b = param_range

    def data(t):
        u, v = state_fn(np.asarray(t, dtype=float))
        return np.broadcast_to(u, np.shape(t)), np.broadcast_to(v, np.shape(t))

    curve = straight_line_curve((a, slope * a), (b, slope * b), data, param_range, system)
    return sys, curve


def _invariant_line(system, inv_fn, param_range, name, **params):
    sys = make_system(system, **params)

    def invariants(t):
        return inv_fn(np.asarray(t, dtype=float))

    def data(t):
        r1, r2 = invariants(t)
        with np.errstate(all="ignore"):
            return sys.from_inv(r1, r2)

    base = straight_line_curve((param_range[0], 0.0), (param_range[1], 0.0), data, param_range)
    curve = BoundaryCurve(base.position, data, param_range, (), base.derivative, invariants, name)
    return sys, curve


def _gas_smooth(gamma=2.0):
    return _invariant_line("gas", lambda t: (t / 4, 1 + t / 4), (0.0, 1.0), "gas-smooth",
                           gamma=gamma)


def _bi_linear():
    # r1 = r = 1 + tau, r2 = s = tau; tau = 0 is excluded because there the
    # first characteristic slope s = 0 is tangent to the initial line
    return _invariant_line("born_infeld", lambda t: (1 + t, t.copy()), (0.1, 1.0), "bi-linear")


def _mikhlin(a=4.0, r=3.0, p=0.5, k=0.5, t0=-0.5 * math.pi, t1=0.5 * math.pi, variant="stadium"):
    return mikhlin_curve(MikhlinParams(a, r, p, k), (t0, t1), variant)


_CONSTANT_STATES = {
    "plasticity": (-1.0, 0.3),
    "coulomb": (-1.0, 0.3),
    "heat": (1.0, 0.2),
    "gas": (1.0, 0.5),
    "beam": (1.0, 0.3),
    "born_infeld": (0.1, 0.8),
}


def _constant(system):
    u0, v0 = _CONSTANT_STATES[system]

    def make(u=u0, v=v0, slope=0.2):
        return _line_fixture(system, lambda t: (np.full(t.shape, u), np.full(t.shape, v)),
                             slope=slope)
    return make


SCENARIOS = {
    "mikhlin": (_mikhlin, "cavity contour (stadium), a=4, r=3, p=k=1/2, t in [-pi/2, pi/2]"),
    "gas-smooth": (_gas_smooth, "gas gamma=2, r1=tau/4, r2=1+tau/4 on y=0, x=tau in [0, 1]"),
    "bi-linear": (_bi_linear, "Born-Infeld, r=1+tau, s=tau on y=0, x=tau in [0.1, 1]"),
    "beam-impact": (lambda: _line_fixture(
        "beam", lambda t: (1.0 + 0.5 * t * t, -0.4 * t)),
        "beam, sigma=1+tau^2/2, velocity=-0.4 tau on y=0, x=tau in [0, 1]"),
    "plasticity-smooth": (lambda k=0.5: _line_fixture(
        "plasticity", lambda t: (-1.0 + 0.2 * t, math.pi / 8 + 0.1 * t), k=k),
        "plasticity, sigma=-1+0.2tau, theta=pi/8+0.1tau on y=0"),
    "coulomb-smooth": (lambda alpha=math.pi / 3: _line_fixture(
        "coulomb", lambda t: (-1.0 + 0.2 * t, 0.3 + 0.1 * t), alpha=alpha),
        "Coulomb, sigma=-1+0.2tau, theta=0.3+0.1tau on y=0"),
    "heat-smooth": (lambda: _line_fixture(
        "heat", lambda t: (1.0 + 0.3 * t, 0.2 * t)),
        "heat, u=1+0.3tau, v=0.2tau on y=0"),
}
for _name in _CONSTANT_STATES:
    SCENARIOS[f"constant-{_name.replace('_', '-')}"] = (
        _constant(_name), f"{_name}, constant state {_CONSTANT_STATES[_name]} on y=0.2x")


def scenario_names():
    return tuple(SCENARIOS)


def scenario(name, **overrides):
    """(SystemDescriptor, BoundaryCurve) for a registered fixture."""
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; registered: {', '.join(SCENARIOS)}")
    factory, _ = SCENARIOS[name]
    try:
        return factory(**overrides)
    except TypeError as exc:
        raise ConfigError(f"bad overrides for scenario {name!r}: {exc}") from None
