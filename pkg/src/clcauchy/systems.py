"""The six diagonal 2x2 hyperbolic systems.

Each system is a :class:`SystemDescriptor`: eigenvalue functions of the
Riemann invariants (r1, r2), the maps between the physical state (u, v) and
(r1, r2), and explicit admissibility predicates.  All callables are numpy
vectorized.

Physical state conventions (u, v):

=============  ==========================  ===============================
system         u                           v
=============  ==========================  ===============================
plasticity     hydrostatic pressure sigma  stress angle theta
coulomb        pressure sigma              stress angle theta
heat           u (> 0)                     v
gas            flow velocity               sound speed c (> 0)
beam           tension sigma (> 0)         particle velocity
born_infeld    dw/dx                       dw/dt
=============  ==========================  ===============================
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Mapping
import math

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import PchipInterpolator

from .errors import ConfigError, DegeneracyError, DomainError

__all__ = [
    "PhysicalState",
    "RiemannPoint",
    "SystemDescriptor",
    "SYSTEM_NAMES",
    "make_system",
    "to_invariants",
    "from_invariants",
    "eigenvalues",
    "sample_states",
]

SYSTEM_NAMES = ("plasticity", "coulomb", "heat", "gas", "beam", "born_infeld")


@dataclass(frozen=True)
class PhysicalState:
    u: float
    v: float


@dataclass(frozen=True)
class RiemannPoint:
    r1: float
    r2: float


@dataclass(frozen=True)
class SystemDescriptor:
    """A hyperbolic system in Riemann-invariant form.

    ``lam(r1, r2)`` returns (lambda1, lambda2) as slopes dy/dx, which can be
    infinite for the stress systems; ``angles(r1, r2)`` returns the direction
    angles of the two characteristic families and is always finite.
    ``state_ok`` / ``point_ok`` are the admissibility predicates, with the
    violated constraint described by ``state_constraint`` / ``point_constraint``.
    """

    name: str
    params: Mapping[str, float]
    lam: Callable
    angles: Callable
    to_inv: Callable
    from_inv: Callable
    state_ok: Callable
    point_ok: Callable
    state_constraint: str
    point_constraint: str
    closed_form_pairs: bool = True
    extras: Mapping = field(default_factory=dict)
    lam_ok: Callable = None

    def eigen_ok(self, r1, r2):
        """Points where the eigenvalues are defined (may exceed the physical image)."""
        return (self.lam_ok or self.point_ok)(r1, r2)

    def lambda1(self, pt):
        return eigenvalues(self, pt)[0]

    def lambda2(self, pt):
        return eigenvalues(self, pt)[1]

    def admissible(self, state):
        return bool(self.state_ok(np.float64(state.u), np.float64(state.v)))


def _finite(*xs):
    ok = True
    for x in xs:
        ok = ok & np.isfinite(x)
    return ok


def _plasticity(k=0.5):
    if not k > 0:
        raise ConfigError("plasticity constant k must be positive")
    k = float(k)

    def lam(r1, r2):
        v = 0.5 * (r2 - r1)
        with np.errstate(divide="ignore"):
            return np.tan(v), -1.0 / np.tan(v)

    def angles(r1, r2):
        v = 0.5 * (r2 - r1)
        return v, v + 0.5 * np.pi

    def to_inv(u, v):
        s = u / (2.0 * k)
        return s - v, s + v

    def from_inv(r1, r2):
        return k * (r1 + r2), 0.5 * (r2 - r1)

    return dict(
        params={"k": k}, lam=lam, angles=angles, to_inv=to_inv, from_inv=from_inv,
        state_ok=_finite, point_ok=_finite,
        state_constraint="finite (sigma, theta)",
        point_constraint="finite (r1, r2)",
    )


def _coulomb(alpha=math.pi / 3, k=0.5):
    alpha = float(alpha)
    if not 0 < alpha < math.pi / 2 or abs(alpha - math.pi / 4) < 1e-12:
        raise ConfigError("Coulomb angle must lie in (0, pi/2) and differ from pi/4")
    k = float(k)
    t2a = math.tan(2 * alpha)
    c2a = 1.0 / t2a

    def theta_cap(theta):
        return theta + 0.25 * np.pi

    def lam(r1, r2):
        th = 0.5 * (r1 - r2)
        return np.tan(th + alpha), np.tan(th - alpha)

    def angles(r1, r2):
        th = 0.5 * (r1 - r2)
        return th + alpha, th - alpha

    def to_inv(u, v):
        log_term = 0.5 * t2a * np.log(u * c2a + k)
        th = theta_cap(v)
        return log_term + th, log_term - th

    def from_inv(r1, r2):
        th = 0.5 * (r1 - r2)
        sigma = (np.exp((r1 + r2) / t2a) - k) * t2a
        return sigma, th - 0.25 * np.pi

    def state_ok(u, v):
        return _finite(u, v) & (u * c2a + k > 0)

    return dict(
        params={"alpha": alpha, "k": k, "gamma_c": 0.5 * c2a},
        lam=lam, angles=angles, to_inv=to_inv, from_inv=from_inv,
        state_ok=state_ok, point_ok=_finite,
        state_constraint="sigma*cot(2 alpha) + k > 0",
        point_constraint="finite (r1, r2)",
    )


def _heat(chi0=1.0, tau0=1.0):
    chi0, tau0 = float(chi0), float(tau0)
    if not (chi0 > 0 and tau0 > 0):
        raise ConfigError("heat constants chi0, tau0 must be positive")

    def lam(r1, r2):
        l1 = chi0 / np.sqrt(r1 * r2)
        return l1, -l1

    def angles(r1, r2):
        l1, l2 = lam(r1, r2)
        return np.arctan(l1), np.arctan(l2)

    def to_inv(u, v):
        return u * np.exp(-v / chi0), u * np.exp(v / chi0)

    def from_inv(r1, r2):
        return np.sqrt(r1 * r2), 0.5 * chi0 * np.log(r2 / r1)

    def state_ok(u, v):
        return _finite(u, v) & (u > 0)

    def point_ok(r1, r2):
        return _finite(r1, r2) & (r1 > 0) & (r2 > 0)

    return dict(
        params={"chi0": chi0, "tau0": tau0}, lam=lam, angles=angles,
        to_inv=to_inv, from_inv=from_inv, state_ok=state_ok, point_ok=point_ok,
        state_constraint="u > 0", point_constraint="r1 > 0 and r2 > 0",
    )


def _gas(gamma=2.0):
    gamma = float(gamma)
    if not gamma > 1:
        raise ConfigError("polytropic exponent gamma must exceed 1")
    alpha = 0.5 + (gamma - 1) / 4
    beta = 0.5 - (gamma - 1) / 4
    kk = (gamma + 1) / (2 * (1 - gamma))
    scale = 2.0 / (gamma - 1)

    def lam(r1, r2):
        return alpha * r1 + beta * r2, alpha * r2 + beta * r1

    def angles(r1, r2):
        l1, l2 = lam(r1, r2)
        return np.arctan(l1), np.arctan(l2)

    def to_inv(u, v):
        return u - scale * v, u + scale * v

    def from_inv(r1, r2):
        return 0.5 * (r1 + r2), 0.5 * (r2 - r1) / scale

    def state_ok(u, v):
        return _finite(u, v) & (v > 0)

    def point_ok(r1, r2):
        return _finite(r1, r2) & (r2 > r1)

    return dict(
        params={"gamma": gamma, "alpha": alpha, "beta": beta, "K": kk},
        lam=lam, angles=angles, to_inv=to_inv, from_inv=from_inv,
        state_ok=state_ok, point_ok=point_ok,
        state_constraint="sound speed c > 0", point_constraint="r2 > r1",
    )


def _beam(wave_speed=None):
    """Beam with a(sigma) = sqrt(sigma), or a tabulated wave speed.

    ``wave_speed`` is an optional pair of arrays (sigma, a) with strictly
    increasing sigma and a > 0.  The invariant integral G(sigma) is then
    accumulated from the first tabulated sigma, which only shifts both
    invariants by opposite constants.
    """
    if wave_speed is None:
        def speed(sigma):
            return np.sqrt(sigma)

        def big_g(sigma):
            return 2.0 * np.sqrt(sigma)

        def big_g_inv(g):
            return 0.25 * g * g

        lo = 0.0
        closed = True
        params = {}
    else:
        sig, a = (np.asarray(x, dtype=float) for x in wave_speed)
        if sig.ndim != 1 or sig.size < 4 or np.any(np.diff(sig) <= 0) or np.any(a <= 0):
            raise ConfigError("wave speed table needs >= 4 increasing sigma with a > 0")
        speed = PchipInterpolator(sig, a, extrapolate=False)
        fine = np.linspace(sig[0], sig[-1], 20 * sig.size + 1)
        g_vals = cumulative_trapezoid(1.0 / speed(fine), fine, initial=0.0)
        big_g = PchipInterpolator(fine, g_vals, extrapolate=False)
        big_g_inv = PchipInterpolator(g_vals, fine, extrapolate=False)
        lo = sig[0]
        closed = False
        params = {"sigma_min": float(sig[0]), "sigma_max": float(sig[-1])}

    def lam(r1, r2):
        a = speed(big_g_inv(0.5 * (r1 - r2)))
        return -a, a

    def angles(r1, r2):
        l1, l2 = lam(r1, r2)
        return np.arctan(l1), np.arctan(l2)

    def to_inv(u, v):
        g = big_g(u)
        return v + g, v - g

    def from_inv(r1, r2):
        return big_g_inv(0.5 * (r1 - r2)), 0.5 * (r1 + r2)

    def state_ok(u, v):
        ok = _finite(u, v) & (u > lo)
        if not closed:
            ok = ok & (u <= params["sigma_max"])
        return ok

    def point_ok(r1, r2):
        return _finite(r1, r2) & (r1 > r2)

    return dict(
        params=params, lam=lam, angles=angles, to_inv=to_inv, from_inv=from_inv,
        state_ok=state_ok, point_ok=point_ok,
        state_constraint="sigma > 0" if closed else "sigma inside the tabulated range",
        point_constraint="r1 > r2", closed_form_pairs=closed,
    )


def _born_infeld(sheet1=1, sheet2=1):
    """Born-Infeld plane waves.

    The invariant map is two-to-one on the hyperbolic region
    1 + u^2 - v^2 > 0; ``sheet1``/``sheet2`` select the branch by the signs of
    r1*u + v and r2*u + v, which the inverse map needs.
    """
    e1, e2 = int(sheet1), int(sheet2)
    if e1 not in (-1, 1) or e2 not in (-1, 1):
        raise ConfigError("Born-Infeld sheets must be +1 or -1")

    def lam(r1, r2):
        return r2, r1

    def angles(r1, r2):
        return np.arctan(r2), np.arctan(r1)

    def to_inv(u, v):
        root = np.sqrt(1.0 + u * u - v * v)
        den = 1.0 + u * u
        return (-u * v - root) / den, (-u * v + root) / den

    def from_inv(r1, r2):
        s1 = np.sqrt(1.0 - r1 * r1)
        s2 = np.sqrt(1.0 - r2 * r2)
        u = (e1 * s1 - e2 * s2) / (r1 - r2)
        return u, e1 * s1 - r1 * u

    def state_ok(u, v):
        disc = 1.0 + u * u - v * v
        root = np.sqrt(np.maximum(disc, 0.0))
        return (_finite(u, v) & (disc > 0)
                & (np.sign(v - u * root) == e1) & (np.sign(v + u * root) == e2))

    def point_ok(r1, r2):
        return _finite(r1, r2) & (-1 < r1) & (r1 < r2) & (r2 < 1)

    return dict(
        params={"sheet1": float(e1), "sheet2": float(e2)}, lam=lam, angles=angles,
        to_inv=to_inv, from_inv=from_inv, state_ok=state_ok, point_ok=point_ok,
        state_constraint=f"1 + u^2 - v^2 > 0 on sheet ({e1:+d}, {e2:+d})",
        point_constraint="-1 < r1 < r2 < 1",
        lam_ok=lambda r1, r2: _finite(r1, r2) & (r1 != r2),
    )


_FACTORIES = {
    "plasticity": _plasticity,
    "coulomb": _coulomb,
    "heat": _heat,
    "gas": _gas,
    "beam": _beam,
    "born_infeld": _born_infeld,
}


def make_system(name, **params):
    """Build a system by name, with keyword overrides of its parameters."""
    key = name.replace("-", "_")
    if key not in _FACTORIES:
        raise ConfigError(f"unknown system {name!r}; choose from {', '.join(SYSTEM_NAMES)}")
    try:
        parts = _FACTORIES[key](**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {key}: {exc}") from None
    parts["params"] = MappingProxyType(dict(parts["params"]))
    return SystemDescriptor(name=key, **parts)


def to_invariants(sys, state):
    """Riemann invariants of an admissible physical state."""
    u, v = np.float64(state.u), np.float64(state.v)
    if not sys.state_ok(u, v):
        raise DomainError(f"{sys.name}: state ({state.u}, {state.v}) violates {sys.state_constraint}")
    r1, r2 = sys.to_inv(u, v)
    return RiemannPoint(float(r1), float(r2))


def from_invariants(sys, pt):
    """Physical state with the given Riemann invariants."""
    r1, r2 = np.float64(pt.r1), np.float64(pt.r2)
    if not sys.point_ok(r1, r2):
        raise DomainError(f"{sys.name}: point ({pt.r1}, {pt.r2}) violates {sys.point_constraint}")
    with np.errstate(all="ignore"):
        u, v = sys.from_inv(r1, r2)
    if not (np.isfinite(u) and np.isfinite(v)):
        raise DomainError(f"{sys.name}: point ({pt.r1}, {pt.r2}) has no physical preimage")
    return PhysicalState(float(u), float(v))


def eigenvalues(sys, pt):
    """Characteristic slopes (lambda1, lambda2) at an invariant point."""
    r1, r2 = np.float64(pt.r1), np.float64(pt.r2)
    if not sys.eigen_ok(r1, r2):
        raise DomainError(f"{sys.name}: point ({pt.r1}, {pt.r2}) violates {sys.point_constraint}")
    with np.errstate(all="ignore"):
        l1, l2 = sys.lam(r1, r2)
    l1, l2 = float(l1), float(l2)
    if not (math.isfinite(l1) and math.isfinite(l2)):
        raise DomainError(f"{sys.name}: vertical characteristic at ({pt.r1}, {pt.r2}); "
                          "the slope form needs finite lambda (plasticity: sin 2v != 0)")
    if abs(l1 - l2) <= 1e-12 * max(1.0, abs(l1), abs(l2)):
        raise DegeneracyError(f"{sys.name}: lambda1 = lambda2 = {l1} at ({pt.r1}, {pt.r2})")
    return l1, l2


# boxes in (u, v) used for property sampling; filtered by state_ok
_SAMPLE_BOXES = {
    "plasticity": ((-2.0, 2.0), (0.1, 0.5 * math.pi - 0.1)),
    "coulomb": ((-2.0, 0.5), (0.0, 0.6)),
    "heat": ((0.5, 2.0), (-1.0, 1.0)),
    "gas": ((-1.0, 1.0), (0.2, 1.0)),
    "beam": ((0.5, 2.0), (-1.0, 1.0)),
    "born_infeld": ((-0.3, 0.3), (0.6, 0.9)),
}


def sample_states(sys, n, seed=0):
    """``n`` admissible physical states drawn uniformly from a fixed box."""
    (u_lo, u_hi), (v_lo, v_hi) = _SAMPLE_BOXES[sys.name]
    if sys.name == "beam" and "sigma_min" in sys.params:
        u_lo = max(u_lo, sys.params["sigma_min"] * 1.01)
        u_hi = min(u_hi, sys.params["sigma_max"] * 0.99)
    rng = np.random.default_rng(seed)
    us, vs = [], []
    while sum(x.size for x in us) < n:
        u = rng.uniform(u_lo, u_hi, 2 * n)
        v = rng.uniform(v_lo, v_hi, 2 * n)
        ok = sys.state_ok(u, v)
        us.append(u[ok])
        vs.append(v[ok])
    return np.concatenate(us)[:n], np.concatenate(vs)[:n]
