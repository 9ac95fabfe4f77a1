"""Second-order forms of the hodograph and pair systems.

Eliminating y from the hodograph relations y_{r1} = lambda2 x_{r1},
y_{r2} = lambda1 x_{r2} gives

    x_{12} + C1 x_1 + C2 x_2 = 0,   C1 = -lambda2_2 / D,  C2 = lambda1_1 / D

and eliminating psi from psi_{ri} = lambda_i phi_{ri} gives

    phi_{12} + C1 phi_1 + C2 phi_2 = 0,   C1 = lambda1_2 / D,  C2 = -lambda2_1 / D

with D = lambda1 - lambda2 and subscripts denoting r-derivatives.  Their
Laplace invariants h = dC1/dr1 + C1 C2, k = dC2/dr2 + C1 C2 decide whether
the two equations differ only by a factor function w.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegeneracyError, DomainError
from .specfun import kernel_i0, kernel_i0_dq
from .systems import RiemannPoint, eigenvalues, sample_states

__all__ = [
    "Equation",
    "LaplaceInvariants",
    "PairingCase",
    "LambdaJet",
    "lambda_jet",
    "laplace_invariants",
    "lambda_relation_residual",
    "w_residual",
    "simplest_case_pairing",
    "pairing_constant",
    "closed_form_factor",
    "plasticity_hodograph",
    "hodograph_residual",
    "det_const_pair_residual",
]

DEFAULT_H = 1e-5
_SECOND_STEP = 10.0        # mixed derivatives use this multiple of h_fd
_CLASSIFY_TOL = 1e-10


class Equation(Enum):
    EQ_X = "eq_x"
    EQ_PHI = "eq_phi"

    @classmethod
    def parse(cls, eq):
        if isinstance(eq, cls):
            return eq
        key = str(eq).lower().replace("-", "_")
        for member in cls:
            if key in (member.value, member.value[3:]):
                return member
        raise DomainError(f"unknown equation {eq!r}; use eq_x or eq_phi")


class PairingCase(Enum):
    DET_CONST = "det_const"
    ANTISYMMETRIC = "antisymmetric"
    GENERAL = "general"


@dataclass(frozen=True)
class LaplaceInvariants:
    h: float
    k: float
    at: RiemannPoint
    equation: Equation


@dataclass(frozen=True)
class LambdaJet:
    """Eigenvalues and their first and mixed derivatives at a point."""

    l1: float
    l2: float
    l1_1: float
    l1_2: float
    l2_1: float
    l2_2: float
    l1_12: float
    l2_12: float


def _lam(sys, r1, r2):
    with np.errstate(all="ignore"):
        l1, l2 = sys.lam(np.asarray(r1, dtype=float), np.asarray(r2, dtype=float))
    return np.asarray(l1, dtype=float), np.asarray(l2, dtype=float)


def _exact_jet(sys, r1, r2):
    l1, l2 = _lam(sys, r1, r2)
    if sys.name == "gas":
        a, b = sys.params["alpha"], sys.params["beta"]
        return LambdaJet(float(l1), float(l2), a, b, b, a, 0.0, 0.0)
    if sys.name == "born_infeld":
        return LambdaJet(float(l1), float(l2), 0.0, 1.0, 1.0, 0.0, 0.0, 0.0)
    raise DomainError(f"exact derivatives available only for linear eigenvalues, not {sys.name}")


def lambda_jet(sys, pt, h_fd=DEFAULT_H, exact=False):
    """Derivatives of the eigenvalues: central differences, or exact for linear ones."""
    if not h_fd > 0:
        raise DomainError("h_fd must be positive")
    l1, l2 = eigenvalues(sys, pt)
    if abs(l1 - l2) <= 1e-12 * max(1.0, abs(l1), abs(l2)):
        raise DegeneracyError(f"{sys.name}: lambda1 = lambda2 at ({pt.r1}, {pt.r2})")
    if exact:
        return _exact_jet(sys, pt.r1, pt.r2)
    r1, r2 = pt.r1, pt.r2
    h = h_fd
    s = _SECOND_STEP * h_fd
    px = np.concatenate([[r1 + h, r1 - h, r1, r1], _mixed_offsets(r1, s, 0)])
    py = np.concatenate([[r2, r2, r2 + h, r2 - h], _mixed_offsets(r2, s, 1)])
    a, b = _lam(sys, px, py)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DomainError(f"{sys.name}: eigenvalues undefined near ({r1}, {r2})")
    return LambdaJet(l1, l2,
                     (a[0] - a[1]) / (2 * h), (a[2] - a[3]) / (2 * h),
                     (b[0] - b[1]) / (2 * h), (b[2] - b[3]) / (2 * h),
                     _mixed(a[4:], s), _mixed(b[4:], s))


def _mixed_offsets(r, s, axis):
    """Stencil coordinates for :func:`_mixed` at steps s and 2s."""
    signs = ((1, 1), (1, -1), (-1, 1), (-1, -1))
    return np.array([r + m * sg[axis] * s for m in (1, 2) for sg in signs])


def _mixed(f, s):
    """Mixed second derivative, Richardson-extrapolated from steps s and 2s."""
    d1 = (f[0] - f[1] - f[2] + f[3]) / (4 * s * s)
    d2 = (f[4] - f[5] - f[6] + f[7]) / (16 * s * s)
    return (4 * d1 - d2) / 3


def _coefficients(jet, equation):
    d = jet.l1 - jet.l2
    if equation is Equation.EQ_X:
        return -jet.l2_2 / d, jet.l1_1 / d
    return jet.l1_2 / d, -jet.l2_1 / d


def laplace_invariants(sys, equation, pt, h_fd=DEFAULT_H, exact=False):
    """Laplace invariants (h, k) of the x- or phi-equation at ``pt``."""
    equation = Equation.parse(equation)
    j = lambda_jet(sys, pt, h_fd, exact)
    d = j.l1 - j.l2
    c1, c2 = _coefficients(j, equation)
    # derivatives of the coefficients by the quotient rule on the jet
    if equation is Equation.EQ_X:
        dc1_1 = -j.l2_12 / d + j.l2_2 * (j.l1_1 - j.l2_1) / d ** 2
        dc2_2 = j.l1_12 / d - j.l1_1 * (j.l1_2 - j.l2_2) / d ** 2
    else:
        dc1_1 = j.l1_12 / d - j.l1_2 * (j.l1_1 - j.l2_1) / d ** 2
        dc2_2 = -j.l2_12 / d + j.l2_1 * (j.l1_2 - j.l2_2) / d ** 2
    return LaplaceInvariants(float(dc1_1 + c1 * c2), float(dc2_2 + c1 * c2),
                             RiemannPoint(float(pt.r1), float(pt.r2)), equation)


def lambda_relation_residual(sys, pt, h_fd=DEFAULT_H, exact=False):
    """(l1 - l2) (l1 + l2)_12 - (l1_1 l1_2 - l2_1 l2_2); zero iff h_x = k_x."""
    j = lambda_jet(sys, pt, h_fd, exact)
    return float((j.l1 - j.l2) * (j.l1_12 + j.l2_12) - (j.l1_1 * j.l1_2 - j.l2_1 * j.l2_2))


def w_residual(sys, w, pt, h_fd=DEFAULT_H, exact=False):
    """Residuals of the factor-function system for ``w(r1, r2)``.

    Returns (w_1/w - (C2x - C2phi), w_2/w - (C1x - C1phi),
    w_12 + C1phi w_1 + C2phi w_2).
    """
    j = lambda_jet(sys, pt, h_fd, exact)
    c1x, c2x = _coefficients(j, Equation.EQ_X)
    c1p, c2p = _coefficients(j, Equation.EQ_PHI)
    r1, r2 = pt.r1, pt.r2
    h = h_fd
    s = _SECOND_STEP * h_fd
    px = np.concatenate([[r1, r1 + h, r1 - h, r1, r1], _mixed_offsets(r1, s, 0)])
    py = np.concatenate([[r2, r2, r2, r2 + h, r2 - h], _mixed_offsets(r2, s, 1)])
    wv = np.asarray(w(px, py), dtype=float)
    if not np.all(wv > 0):
        raise DomainError("factor function w must be positive near the point")
    w1 = (wv[1] - wv[2]) / (2 * h)
    w2 = (wv[3] - wv[4]) / (2 * h)
    w12 = _mixed(wv[5:], s)
    return (float(w1 / wv[0] - (c2x - c2p)), float(w2 / wv[0] - (c1x - c1p)),
            float(w12 + c1p * w1 + c2p * w2))


def closed_form_factor(sys):
    """Factor w relating phi to x for the gas and Born-Infeld systems."""
    if sys.name == "gas":
        a, b = sys.params["alpha"], sys.params["beta"]
        p = (a + b) / (a - b)
        return lambda r1, r2: np.abs(r1 - r2) ** p
    if sys.name == "born_infeld":
        return lambda r1, r2: -1.0 / (r1 - r2)
    raise DomainError(f"no closed-form factor function for {sys.name}")


def _sample_points(sys, n, seed):
    u, v = sample_states(sys, n, seed)
    r1, r2 = sys.to_inv(u, v)
    return np.asarray(r1, dtype=float), np.asarray(r2, dtype=float)


def _spread(values):
    values = np.asarray(values, dtype=float)
    return float(values.max() - values.min())


def simplest_case_pairing(sys, n=200, seed=0):
    """Classify by sampling: constant det(Lambda), lambda1 = -lambda2, or neither."""
    r1, r2 = _sample_points(sys, n, seed)
    l1, l2 = _lam(sys, r1, r2)
    det = l1 * l2
    if _spread(det) <= _CLASSIFY_TOL * max(1.0, float(np.abs(det).max())):
        return PairingCase.DET_CONST
    if float(np.abs(l1 + l2).max()) <= _CLASSIFY_TOL * max(1.0, float(np.abs(l1).max())):
        return PairingCase.ANTISYMMETRIC
    return PairingCase.GENERAL


def pairing_constant(sys, n=200, seed=0):
    """The constant K = det(Lambda) for det_const systems, else None."""
    if simplest_case_pairing(sys, n, seed) is not PairingCase.DET_CONST:
        return None
    r1, r2 = _sample_points(sys, n, seed)
    l1, l2 = _lam(sys, r1, r2)
    return float(np.round(np.mean(l1 * l2), 12))


def plasticity_hodograph(kind="exponential", p=0.5):
    """Closed-form hodograph solutions (x, y)(r1, r2) of the plasticity system.

    With v = (r2 - r1)/2, x = A cos v - B sin v and y = A sin v + B cos v
    solve the hodograph relations iff A_1 = -B/2 and B_2 = -A/2, so that
    A_12 = A/4.  ``exponential``: A = exp(p r1 + r2/(4p)); ``bessel``:
    A = I0(sqrt(r1 r2)).
    """
    if kind == "exponential":
        if p == 0:
            raise DomainError("exponential hodograph needs p != 0")

        def ab(r1, r2):
            a = np.exp(p * r1 + r2 / (4 * p))
            return a, -2 * p * a
    elif kind == "bessel":
        def ab(r1, r2):
            return kernel_i0(r1 * r2), -2 * r2 * kernel_i0_dq(r1 * r2)
    else:
        raise DomainError("hodograph kind must be 'exponential' or 'bessel'")

    def xy(r1, r2):
        r1 = np.asarray(r1, dtype=float)
        r2 = np.asarray(r2, dtype=float)
        a, b = ab(r1, r2)
        v = 0.5 * (r2 - r1)
        return a * np.cos(v) - b * np.sin(v), a * np.sin(v) + b * np.cos(v)

    return xy


def hodograph_residual(sys, xy, pt, h_fd=DEFAULT_H):
    """Residuals y_1 - lambda2 x_1 and y_2 - lambda1 x_2 of a hodograph solution."""
    l1, l2 = eigenvalues(sys, pt)
    h = h_fd
    x, y = xy(np.array([pt.r1 + h, pt.r1 - h, pt.r1, pt.r1]),
              np.array([pt.r2, pt.r2, pt.r2 + h, pt.r2 - h]))
    return (float((y[0] - y[1]) / (2 * h) - l2 * (x[0] - x[1]) / (2 * h)),
            float((y[2] - y[3]) / (2 * h) - l1 * (x[2] - x[3]) / (2 * h)))


def det_const_pair_residual(sys, xy, pt, h_fd=DEFAULT_H):
    """Conservation residuals of (phi, psi) = (y, K x) built from a hodograph solution."""
    big_k = pairing_constant(sys)
    if big_k is None:
        raise DomainError(f"{sys.name} does not have a constant det(Lambda)")
    l1, l2 = eigenvalues(sys, pt)
    h = h_fd
    x, y = xy(np.array([pt.r1 + h, pt.r1 - h, pt.r1, pt.r1]),
              np.array([pt.r2, pt.r2, pt.r2 + h, pt.r2 - h]))
    phi, psi = y, big_k * x
    return (float(l1 * (phi[0] - phi[1]) / (2 * h) - (psi[0] - psi[1]) / (2 * h)),
            float(l2 * (phi[2] - phi[3]) / (2 * h) - (psi[2] - psi[3]) / (2 * h)))
