"""Conservation-law pairs (phi, psi) solving the linear system

    lambda_i * d(phi)/d(r_i) = d(psi)/d(r_i),   i = 1, 2,

with data on the two characteristics through a base point (r1_0, r2_0):

* x-problem:  psi - lambda1*phi = 1 on r1 = r1_0,  psi - lambda2*phi = 0 on r2 = r2_0;
* y-problem:  psi/lambda1 - phi = 1 on r1 = r1_0,  psi/lambda2 - phi = 0 on r2 = r2_0.

Each system has a closed form built from a Riemann kernel (Bessel or
hypergeometric) and one integral along the base line; derivatives with
respect to r1 are taken under the integral sign.  All evaluators are
vectorized over (r1, r2, r1_0, r2_0) and elementwise deterministic.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import AccuracyError, DomainError, SingularityError
from .specfun import hyp2f1, kernel_i0, kernel_i0_dq, quad_batch
from .systems import RiemannPoint

__all__ = [
    "ProblemKind",
    "BasePoint",
    "ConservationPair",
    "pair",
    "pair_arrays",
    "cl2_residual",
    "base_conditions_residual",
    "plasticity_rho",
    "coulomb_psi",
    "heat_phi",
    "gas_rho2",
    "beam_rho2",
    "GUARD",
]

GUARD = 1e-9
DEFAULT_TOL = 1e-10


class ProblemKind(Enum):
    X = "x_problem"
    Y = "y_problem"

    @classmethod
    def parse(cls, kind):
        if isinstance(kind, cls):
            return kind
        text = str(kind).lower()
        if text in ("x", "x_problem"):
            return cls.X
        if text in ("y", "y_problem"):
            return cls.Y
        raise DomainError(f"unknown problem kind {kind!r}")


@dataclass(frozen=True)
class BasePoint:
    r1_0: float
    r2_0: float


@dataclass(frozen=True)
class ConservationPair:
    phi: float
    psi: float


def _inner(fn, lo, hi, tol, what):
    """Integrate a two-component integrand (value, r1-derivative) per row."""
    vals, errs, _, failed = quad_batch(fn, lo, hi, tol)
    if failed.any():
        i = int(np.nonzero(failed)[0][0])
        raise AccuracyError(f"{what}: inner quadrature failed", est_error=float(errs[i]))
    if vals.ndim == 1:
        vals = np.zeros((lo.size, 2))
    return vals[:, 0], vals[:, 1]


def _require_positive(name, value):
    if np.any(~(value > GUARD)):
        raise SingularityError(f"kernel factor {name} within {GUARD:g} of zero (or of wrong sign)",
                               factor=name)


# Plasticity --------------------------------------------------------------

def plasticity_rho(kind, r1, r2, b1, b2, tol=DEFAULT_TOL):
    """Kernel rho of the plasticity pair and its derivative d(rho)/d(r1).

    rho solves the telegraph-type Goursat problem with Riemann kernel
    I0(sqrt((r1 - r1_0)(r2 - t))).
    """
    kind = ProblemKind.parse(kind)
    r1, r2, b1, b2 = (np.asarray(x, dtype=float).reshape(-1) for x in np.broadcast_arrays(r1, r2, b1, b2))
    d1 = r1 - b1
    if kind is ProblemKind.X:
        g0 = np.cos(0.5 * (b2 - b1))

        def gp(t, c):
            return -0.5 * np.sin(0.5 * (t - c))
    else:
        g0 = np.sin(0.5 * (b2 - b1))

        def gp(t, c):
            return 0.5 * np.cos(0.5 * (t - c))

    def integrand(t, rows):
        lag = r2[rows, None] - t
        q = d1[rows, None] * lag
        g = gp(t, b1[rows, None])
        return np.stack([kernel_i0(q) * g, kernel_i0_dq(q) * lag * g], axis=-1)

    i0, i1 = _inner(integrand, b2, r2, tol, "plasticity rho")
    q0 = d1 * (r2 - b2)
    rho = kernel_i0(q0) * g0 + i0
    rho_1 = kernel_i0_dq(q0) * (r2 - b2) * g0 + i1
    return rho, rho_1


def _pair_plasticity(sys, kind, r1, r2, b1, b2, tol):
    rho, rho_1 = plasticity_rho(kind, r1, r2, b1, b2, tol)
    v = 0.5 * (r2 - r1)
    c, s = np.cos(v), np.sin(v)
    return 2 * rho_1 * c - rho * s, 2 * rho_1 * s + rho * c


# Coulomb -----------------------------------------------------------------

def coulomb_psi(kind, r1, r2, b1, b2, alpha, tol=DEFAULT_TOL):
    """Telegraph-equation solution Psi and d(Psi)/d(r1) for the Coulomb pair."""
    kind = ProblemKind.parse(kind)
    r1, r2, b1, b2 = (np.asarray(x, dtype=float).reshape(-1) for x in np.broadcast_arrays(r1, r2, b1, b2))
    s2 = np.sin(2 * alpha) ** 2
    gc = 0.5 / np.tan(2 * alpha)
    d1 = (r1 - b1) / s2
    trig, trig_p = (np.cos, np.sin) if kind is ProblemKind.X else (np.sin, np.cos)
    sign = -1.0 if kind is ProblemKind.X else 1.0

    def data(t, c):
        return -np.exp(-gc * (c + t)) * trig(0.5 * (c - t) + alpha)

    def data_dt(t, c):
        arg = 0.5 * (c - t) + alpha
        return np.exp(-gc * (c + t)) * (gc * trig(arg) + sign * 0.5 * trig_p(arg))

    def integrand(t, rows):
        lag = r2[rows, None] - t
        q = d1[rows, None] * lag
        g = data_dt(t, b1[rows, None])
        return np.stack([kernel_i0(q) * g, kernel_i0_dq(q) * lag / s2 * g], axis=-1)

    i0, i1 = _inner(integrand, b2, r2, tol, "Coulomb Psi")
    q0 = d1 * (r2 - b2)
    g0 = data(b2, b1)
    psi = g0 * kernel_i0(q0) + i0
    psi_1 = g0 * kernel_i0_dq(q0) * (r2 - b2) / s2 + i1
    return psi, psi_1


def _pair_coulomb(sys, kind, r1, r2, b1, b2, tol):
    alpha = sys.params["alpha"]
    big_psi, big_psi_1 = coulomb_psi(kind, r1, r2, b1, b2, alpha, tol)
    s = np.sin(2 * alpha)
    big_phi = -2.0 * s * big_psi_1
    th = 0.5 * (r1 - r2)
    e = np.exp(0.5 / np.tan(2 * alpha) * (r1 + r2)) / s
    phi = e * (-big_phi * np.cos(th + alpha) + big_psi * np.cos(th - alpha))
    psi = e * (-big_phi * np.sin(th + alpha) + big_psi * np.sin(th - alpha))
    return phi, psi


# Hyperbolic heat ---------------------------------------------------------

def heat_phi(kind, r1, r2, b1, b2, chi0=1.0, tol=DEFAULT_TOL):
    """Kernel Phi of the heat pair and d(Phi)/d(r1)."""
    kind = ProblemKind.parse(kind)
    r1, r2, b1, b2 = (np.asarray(x, dtype=float).reshape(-1) for x in np.broadcast_arrays(r1, r2, b1, b2))
    for name, val in (("r1", r1), ("r2", r2), ("r1_0", b1), ("r2_0", b2)):
        if np.any(~(val > 0)):
            raise DomainError(f"heat kernel needs positive invariants ({name} <= 0)")
    if kind is ProblemKind.X:
        const = b1 ** 0.25
        head = b2 ** 0.25

        def weight(t):
            return 0.25 * t ** -0.75
    else:
        const = chi0 * b1 ** -0.25
        head = b2 ** -0.25

        def weight(t):
            return -0.25 * t ** -1.25
    l1 = np.log(r1 / b1)

    def integrand(t, rows):
        lt = np.log(r2[rows, None] / t)
        q = 0.25 * l1[rows, None] * lt
        w = weight(t)
        return np.stack([kernel_i0(q) * w, kernel_i0_dq(q) * lt * w], axis=-1)

    i0, i1 = _inner(integrand, b2, r2, tol, "heat Phi")
    l2 = np.log(r2 / b2)
    q0 = 0.25 * l1 * l2
    bracket = head * kernel_i0(q0) + i0
    bracket_1 = (head * kernel_i0_dq(q0) * l2 + i1) / (4.0 * r1)
    scale = const * (r1 * r2) ** -0.25
    big_phi = scale * bracket
    big_phi_1 = scale * (bracket_1 - bracket / (4.0 * r1))
    return big_phi, big_phi_1


def _pair_heat(sys, kind, r1, r2, b1, b2, tol):
    chi0 = sys.params["chi0"]
    big_phi, big_phi_1 = heat_phi(kind, r1, r2, b1, b2, chi0, tol)
    phi = 2.0 / chi0 * r1 ** 1.5 * r2 ** 0.5 * big_phi_1
    psi = 2.0 * r1 * big_phi_1 + big_phi
    return phi, psi


# Polytropic gas and beam ---------------------------------------------------

def gas_rho2(kind, r1, r2, b1, b2, alpha, beta, K, tol=DEFAULT_TOL):
    """Hypergeometric kernel rho2 = psi - lambda1*phi and d(rho2)/d(r1).

    Kernel 2F1(K, K+1; 1; z) with the cross ratio
    z(t) = (r1_0 - r1)(r2 - t) / ((r2 - r1_0)(t - r1)).
    """
    kind = ProblemKind.parse(kind)
    r1, r2, b1, b2 = (np.asarray(x, dtype=float).reshape(-1) for x in np.broadcast_arrays(r1, r2, b1, b2))
    for name, val in (("r2 - r1", r2 - r1), ("r2_0 - r1", b2 - r1),
                      ("r2 - r1_0", r2 - b1), ("r2_0 - r1_0", b2 - b1)):
        _require_positive(name, val)

    def kernel(z):
        if np.any(z > 1.0):
            raise DomainError("hypergeometric cross ratio exceeds 1 (invariant ordering)")
        return hyp2f1(K, K + 1, 1.0, z), K * (K + 1) * hyp2f1(K + 1, K + 2, 2.0, z)

    def cross(t, c1, c2, x1):
        z = (c1 - x1) * (c2 - t) / ((c2 - c1) * (t - x1))
        z_1 = (c2 - t) * (c1 - t) / ((c2 - c1) * (t - x1) ** 2)
        return z, z_1

    if kind is ProblemKind.X:
        head = (b2 - b1) ** (2 * K + 1)

        def weight(t, c1):
            return (K + 1) * (t - c1) ** (2 * K)
    else:
        head = (alpha * b1 + beta * b2) * (b2 - b1) ** (2 * K + 1)

        def weight(t, c1):
            return (t - c1) ** (2 * K) * (beta * (t - c1) + (K + 1) * (beta * t + alpha * c1))

    def integrand(t, rows):
        x1 = r1[rows, None]
        c1 = b1[rows, None]
        z, z_1 = cross(t, c1, r2[rows, None], x1)
        f, fp = kernel(z)
        base = (t - x1) ** -K
        w = weight(t, c1)
        val = w * base * f
        der = w * (K * base / (t - x1) * f + base * fp * z_1)
        return np.stack([val, der], axis=-1)

    i0, i1 = _inner(integrand, b2, r2, tol, "gas rho2")
    z0, z0_1 = cross(b2, b1, r2, r1)
    f0, fp0 = kernel(z0)
    base0 = (b2 - r1) ** -K
    term0 = head * base0 * f0
    term0_1 = head * (K * base0 / (b2 - r1) * f0 + base0 * fp0 * z0_1)
    pref = (r2 - b1) ** -(K + 1)
    return pref * (term0 + i0), pref * (term0_1 + i1)


def _combine(rho1, rho2, l1, l2):
    d = l1 - l2
    return (rho1 - rho2) / d, (l1 * rho1 - l2 * rho2) / d


def _pair_gas(sys, kind, r1, r2, b1, b2, tol):
    p = sys.params
    rho2, rho2_1 = gas_rho2(kind, r1, r2, b1, b2, p["alpha"], p["beta"], p["K"], tol)
    rho1 = rho2 - (r2 - r1) / p["K"] * rho2_1
    l1, l2 = sys.lam(r1, r2)
    return _combine(rho1, rho2, l1, l2)


# In the reversed frame s = -r1, r = -r2 the beam pair is a gas pair with
# these constants (the labelling that keeps lambda1 = -sqrt(sigma)).
BEAM_FRAME = {"alpha": 0.25, "beta": -0.25, "K": -0.5}


def beam_rho2(kind, r1, r2, b1, b2, tol=DEFAULT_TOL):
    """Direct beam kernel rho2 = psi - lambda1*phi and d(rho2)/d(r1).

    Kernel 2F1(-1/2, 1/2; 1; z), z = (r1 - r1_0)(r2 - t) / ((r1 - t)(r2 - r1_0)).
    This path is independent of the reversed-frame gas evaluation and is
    used to cross-check it.
    """
    kind = ProblemKind.parse(kind)
    r1, r2, b1, b2 = (np.asarray(x, dtype=float).reshape(-1) for x in np.broadcast_arrays(r1, r2, b1, b2))
    for name, val in (("r1 - r2", r1 - r2), ("r1 - r2_0", r1 - b2),
                      ("r1_0 - r2", b1 - r2), ("r1_0 - r2_0", b1 - b2)):
        _require_positive(name, val)

    def kernel(z):
        if np.any(z > 1.0):
            raise DomainError("hypergeometric cross ratio exceeds 1 (invariant ordering)")
        return hyp2f1(-0.5, 0.5, 1.0, z), -0.25 * hyp2f1(0.5, 1.5, 2.0, z)

    def cross(t, c1, c2, x1):
        z = (x1 - c1) * (c2 - t) / ((x1 - t) * (c2 - c1))
        z_1 = (c1 - t) * (c2 - t) / ((x1 - t) ** 2 * (c2 - c1))
        return z, z_1

    root = np.sqrt(b1 - r2)
    ratio = np.sqrt((r1 - b2) / (b1 - r2))
    ratio_1 = 0.5 / np.sqrt((r1 - b2) * (b1 - r2))
    if kind is ProblemKind.X:
        head = np.ones_like(r1)
        coef = -0.5 / root

        def weight(t, x1, c1):
            s = np.sqrt(x1 - t)
            return s / (c1 - t), 0.5 / (s * (c1 - t))
    else:
        head = -0.25 * (b1 - b2)
        coef = 0.375 / root

        def weight(t, x1, c1):
            s = np.sqrt(x1 - t)
            return s, 0.5 / s

    def integrand(t, rows):
        x1 = r1[rows, None]
        c1 = b1[rows, None]
        z, z_1 = cross(t, c1, r2[rows, None], x1)
        f, fp = kernel(z)
        w, w_1 = weight(t, x1, c1)
        return np.stack([w * f, w_1 * f + w * fp * z_1], axis=-1)

    i0, i1 = _inner(integrand, b2, r2, tol, "beam rho2")
    z0, z0_1 = cross(b2, b1, r2, r1)
    f0, fp0 = kernel(z0)
    rho2 = head * ratio * f0 + coef * i0
    rho2_1 = head * (ratio_1 * f0 + ratio * fp0 * z0_1) + coef * i1
    return rho2, rho2_1


def _pair_beam(sys, kind, r1, r2, b1, b2, tol):
    if not sys.closed_form_pairs:
        raise DomainError("closed-form beam pairs exist only for a(sigma) = sqrt(sigma)")
    f = BEAM_FRAME
    rho2, rho2_s = gas_rho2(kind, -r1, -r2, -b1, -b2, f["alpha"], f["beta"], f["K"], tol)
    s, r = -r1, -r2
    rho1 = rho2 - (r - s) / f["K"] * rho2_s
    l1, l2 = sys.lam(r1, r2)
    return _combine(rho1, rho2, l1, l2)


def beam_pair_direct(kind, r1, r2, b1, b2, tol=DEFAULT_TOL):
    """Beam pair from :func:`beam_rho2` (cross-check path)."""
    rho2, rho2_1 = beam_rho2(kind, r1, r2, b1, b2, tol)
    r1 = np.asarray(r1, dtype=float).reshape(-1)
    r2 = np.asarray(r2, dtype=float).reshape(-1)
    rho1 = rho2 - 2.0 * (r1 - r2) * rho2_1
    return -2.0 * (rho1 - rho2) / (r1 - r2), 0.5 * (rho1 + rho2)


# Born-Infeld ---------------------------------------------------------------

def _pair_born_infeld(sys, kind, r1, r2, b1, b2, tol):
    d = r1 - r2
    if np.any(np.abs(d) <= GUARD):
        raise SingularityError("kernel factor r1 - r2 within guard band", factor="r1 - r2")
    if kind is ProblemKind.X:
        return 1.0 / d, r1 / d
    return r2 / d, r1 * r2 / d


_EVALUATORS = {
    "plasticity": _pair_plasticity,
    "coulomb": _pair_coulomb,
    "heat": _pair_heat,
    "gas": _pair_gas,
    "beam": _pair_beam,
    "born_infeld": _pair_born_infeld,
}


def pair_arrays(sys, kind, r1, r2, b1, b2, tol=DEFAULT_TOL):
    """Vectorized (phi, psi) at points (r1, r2) for bases (b1, b2)."""
    kind = ProblemKind.parse(kind)
    shape = np.broadcast(r1, r2, b1, b2).shape
    r1, r2, b1, b2 = (np.asarray(x, dtype=float).reshape(-1)
                      for x in np.broadcast_arrays(r1, r2, b1, b2))
    with np.errstate(divide="ignore", invalid="ignore"):
        phi, psi = _EVALUATORS[sys.name](sys, kind, r1, r2, b1, b2, tol)
    phi = np.broadcast_to(phi, r1.shape).reshape(shape)
    psi = np.broadcast_to(psi, r1.shape).reshape(shape)
    return phi, psi


def pair(sys, kind, pt, base, tol=DEFAULT_TOL):
    """Conservation pair of the requested problem kind at ``pt``."""
    phi, psi = pair_arrays(sys, kind, pt.r1, pt.r2, base.r1_0, base.r2_0, tol)
    return ConservationPair(float(phi), float(psi))


def cl2_residual(sys, kind, pt, base, h=1e-5, tol=DEFAULT_TOL):
    """Central-difference residuals lambda_i dphi/dr_i - dpsi/dr_i, i = 1, 2."""
    if not h > 0:
        raise DomainError("step h must be positive")
    r1 = np.array([pt.r1 + h, pt.r1 - h, pt.r1, pt.r1])
    r2 = np.array([pt.r2, pt.r2, pt.r2 + h, pt.r2 - h])
    phi, psi = pair_arrays(sys, kind, r1, r2, base.r1_0, base.r2_0, tol)
    l1, l2 = sys.lam(np.float64(pt.r1), np.float64(pt.r2))
    res1 = l1 * (phi[0] - phi[1]) / (2 * h) - (psi[0] - psi[1]) / (2 * h)
    res2 = l2 * (phi[2] - phi[3]) / (2 * h) - (psi[2] - psi[3]) / (2 * h)
    return float(res1), float(res2)


def base_conditions_residual(sys, kind, base, r_free, tol=DEFAULT_TOL):
    """Residuals of the two characteristic conditions.

    The first value is evaluated on r1 = r1_0 at r2 = r_free, the second on
    r2 = r2_0 at r1 = r_free.  ``r_free`` may be an array.
    """
    kind = ProblemKind.parse(kind)
    rf = np.asarray(r_free, dtype=float)
    b1 = np.full_like(rf, base.r1_0)
    b2 = np.full_like(rf, base.r2_0)
    phi_a, psi_a = pair_arrays(sys, kind, b1, rf, base.r1_0, base.r2_0, tol)
    phi_b, psi_b = pair_arrays(sys, kind, rf, b2, base.r1_0, base.r2_0, tol)
    l1_a, _ = sys.lam(b1, rf)
    _, l2_b = sys.lam(rf, b2)
    if kind is ProblemKind.X:
        res_a = psi_a - l1_a * phi_a - 1.0
        res_b = psi_b - l2_b * phi_b
    else:
        res_a = psi_a / l1_a - phi_a - 1.0
        res_b = psi_b / l2_b - phi_b
    if rf.ndim == 0:
        return float(res_a), float(res_b)
    return res_a, res_b


def as_point(r1, r2):
    return RiemannPoint(float(r1), float(r2))
