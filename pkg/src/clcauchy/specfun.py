"""Special functions and small numerical kernels.

The Riemann kernels are written in terms of the product argument
``q = (r1 - a)(r2 - b)`` so that both signs of ``q`` are handled with real
arithmetic: ``kernel_i0(q) = I0(sqrt(q))`` for ``q >= 0`` and ``J0(sqrt(-q))``
for ``q < 0``.  Everything here accepts scalars or numpy arrays and works
elementwise, so the result for one element never depends on its neighbours.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import special as _sp

from .errors import AccuracyError, DomainError, RangeError

__all__ = [
    "QuadResult",
    "kernel_i0",
    "kernel_i0_dq",
    "hyp2f1",
    "adaptive_quad",
    "quad_batch",
    "central_diff",
    "KERNEL_Q_MAX",
    "KERNEL_Q_MIN",
]

# Branch boundaries for the Bessel kernel, in terms of q.
_SERIES_NEG = -36.0        # below this the alternating series loses digits
_SERIES_POS = 400.0
_ASYMPTOTIC = 1.0e4        # |q| beyond this: large-argument expansions
KERNEL_Q_MAX = 4.9e5       # I0(sqrt(q)) overflows shortly after sqrt(q) = 700
KERNEL_Q_MIN = -1.0e12

_TRAP_NODES = 128
_SERIES_EPS = 1e-17


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _check_kernel_range(q):
    if not np.all(np.isfinite(q)):
        raise DomainError("kernel argument must be finite")
    if np.any(q > KERNEL_Q_MAX) or np.any(q < KERNEL_Q_MIN):
        raise RangeError(
            f"kernel argument outside supported range [{KERNEL_Q_MIN:g}, {KERNEL_Q_MAX:g}]"
        )


def _sum_series(first, step, max_terms=4000, start=1, min_terms=0):
    """Sum terms t_k = step(t_{k-1}, k) elementwise.

    Each element stops accumulating at its own convergence point, so its
    value never depends on the other elements of the array.
    """
    total = first.copy()
    term = first
    active = np.ones(first.shape, dtype=bool)
    for k in range(start, start + max_terms):
        term = step(term, k)
        total = np.where(active, total + term, total)
        if k - start >= min_terms:
            active &= ~(np.abs(term) <= _SERIES_EPS * np.abs(total))
        if not active.any():
            return total
    raise DomainError("series did not converge")


def _i0_series(q):
    """Sum of (q/4)^k / (k!)^2 until the terms stop contributing."""
    x = 0.25 * q
    return _sum_series(np.ones_like(q), lambda term, k: term * x / (k * k))


def _i0_dq_series(q):
    """Sum of k q^(k-1) / (4^k (k!)^2), i.e. the q-derivative of the I0 series."""
    return _sum_series(np.full_like(q, 0.25), lambda term, k: term * q / (4.0 * k * (k + 1)))


_THETA = np.pi * (np.arange(_TRAP_NODES) + 0.5) / _TRAP_NODES
_COS_T = np.cos(_THETA)
_SIN_T = np.sin(_THETA)


def _trap_mean(values):
    # fixed summation order, one node at a time
    acc = values[..., 0].copy()
    for j in range(1, values.shape[-1]):
        acc += values[..., j]
    return acc / values.shape[-1]


def _bessel_trapezoid(q, derivative):
    """Periodic trapezoid rule on the Bessel integral representations.

    I0(z) = mean of exp(z cos t),  I1(z) = mean of exp(z cos t) cos t,
    J0(z) = mean of cos(z sin t),  J1(z) = mean of sin t sin(z sin t),
    all over t in [0, pi].  The integrands are smooth and periodic, so the
    rule converges geometrically.
    """
    z = np.sqrt(np.abs(q))[..., None]
    out = np.empty_like(q)
    pos = q >= 0
    if np.any(pos):
        zp = z[pos]
        e = np.exp(zp * (_COS_T - 1.0))
        if derivative:
            val = _trap_mean(e * _COS_T) / (2.0 * zp[..., 0])
        else:
            val = _trap_mean(e)
        out[pos] = val * np.exp(zp[..., 0])
    neg = ~pos
    if np.any(neg):
        zn = z[neg]
        if derivative:
            out[neg] = _trap_mean(_SIN_T * np.sin(zn * _SIN_T)) / (2.0 * zn[..., 0])
        else:
            out[neg] = _trap_mean(np.cos(zn * _SIN_T))
    return out


def _asym_coeffs(nu, n):
    """a_k(nu) = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k)."""
    a = [1.0]
    for k in range(1, n):
        a.append(a[-1] * (4.0 * nu * nu - (2 * k - 1) ** 2) / (8.0 * k))
    return a


def _bessel_asymptotic(q, derivative):
    """Large-argument Hankel expansions, I0/I1 scaled by exp(z)."""
    nu = 1.0 if derivative else 0.0
    coeffs = _asym_coeffs(nu, 24)
    z = np.sqrt(np.abs(q))
    out = np.empty_like(q)
    pos = q >= 0
    if np.any(pos):
        zp = z[pos]
        s = np.zeros_like(zp)
        for k in reversed(range(len(coeffs))):
            s = s + (-1) ** k * coeffs[k] / zp ** k
        val = np.exp(zp) / np.sqrt(2.0 * np.pi * zp) * s
        out[pos] = val / (2.0 * zp) if derivative else val
    neg = ~pos
    if np.any(neg):
        zn = z[neg]
        p = np.zeros_like(zn)
        qq = np.zeros_like(zn)
        for k in reversed(range(len(coeffs) // 2)):
            p = p + (-1) ** k * coeffs[2 * k] / zn ** (2 * k)
            qq = qq + (-1) ** k * coeffs[2 * k + 1] / zn ** (2 * k + 1)
        w = zn - nu * np.pi / 2 - np.pi / 4
        val = np.sqrt(2.0 / (np.pi * zn)) * (p * np.cos(w) - qq * np.sin(w))
        out[neg] = val / (2.0 * zn) if derivative else val
    return out


def _kernel(q, derivative):
    arr, scalar = _as_float_array(q)
    _check_kernel_range(arr)
    flat = arr.reshape(-1)
    out = np.empty_like(flat)
    series = (flat >= _SERIES_NEG) & (flat <= _SERIES_POS)
    asym = np.abs(flat) > _ASYMPTOTIC
    trap = ~series & ~asym
    if np.any(series):
        out[series] = (_i0_dq_series if derivative else _i0_series)(flat[series])
    if np.any(trap):
        out[trap] = _bessel_trapezoid(flat[trap], derivative)
    if np.any(asym):
        out[asym] = _bessel_asymptotic(flat[asym], derivative)
    out = out.reshape(arr.shape)
    return float(out) if scalar else out


def kernel_i0(q):
    """Riemann kernel I0(sqrt(q)) as a function of the product argument q.

    Negative q gives J0(sqrt(-q)).  Supported range is
    ``KERNEL_Q_MIN <= q <= KERNEL_Q_MAX``; outside it a RangeError is raised.
    """
    return _kernel(q, False)


def kernel_i0_dq(q):
    """Derivative d/dq of :func:`kernel_i0` (equal to 1/4 at q = 0)."""
    return _kernel(q, True)


# Gauss hypergeometric function --------------------------------------------

_HYP_EPS = 1e-17
_HYP_MAX_TERMS = 4000


def _is_nonpos_int(x):
    return x <= 0 and float(x).is_integer()


def _hyp_series(a, b, c, z):
    return _sum_series(np.ones_like(z),
                       lambda term, n: term * ((a + n - 1) * (b + n - 1) / ((c + n - 1) * n)) * z,
                       max_terms=_HYP_MAX_TERMS)


def _hyp_poly(a, b, c, z):
    """Terminating series when a or b is a nonpositive integer."""
    m = int(-min(a if _is_nonpos_int(a) else 1, b if _is_nonpos_int(b) else 1))
    total = np.ones_like(z)
    term = np.ones_like(z)
    for n in range(m):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1))) * z
        total = total + term
    return total


def _hyp_one_minus_z(a, b, c, z):
    """Connection formulas around z = 1, for 0 < 1 - z <= 1/2."""
    w = 1.0 - z
    m = c - a - b
    mi = round(m)
    if abs(m - mi) > 1e-9:
        g1 = _sp.gamma(c) * _sp.gamma(m) * _sp.rgamma(c - a) * _sp.rgamma(c - b)
        g2 = _sp.gamma(c) * _sp.gamma(-m) * _sp.rgamma(a) * _sp.rgamma(b)
        out = g1 * _hyp_series(a, b, 1.0 - m, w)
        if g2 != 0.0:
            out = out + g2 * w ** m * _hyp_series(c - a, c - b, m + 1.0, w)
        return out
    if mi < 0:
        # Euler transformation makes the exponent c - a - b positive.
        return w ** m * _hyp_one_minus_z(c - a, c - b, c, z)
    m = int(mi)
    lw = np.log(w)
    ga = _sp.rgamma(a) * _sp.rgamma(b)
    if m == 0:
        pref = _sp.gamma(a + b) * ga

        def term0(n, coef, wn):
            return coef * (2 * _sp.digamma(n + 1) - _sp.digamma(a + n) - _sp.digamma(b + n) - lw) * wn

        return pref * _log_series(w, term0, lambda n: (a + n - 1) * (b + n - 1) / (n * n), 1.0)
    # c = a + b + m with m >= 1
    c = a + b + m
    finite = np.zeros_like(w)
    coef = 1.0
    wn = np.ones_like(w)
    for n in range(m):
        if n:
            coef *= (a + n - 1) * (b + n - 1) / (n * (1 - m + n - 1))
            wn = wn * w
        finite = finite + coef * wn
    finite = finite * _sp.gamma(m) * _sp.gamma(c) * _sp.rgamma(a + m) * _sp.rgamma(b + m)
    if ga == 0.0:
        return finite

    def term_m(n, coef, wn):
        return coef * (lw - _sp.digamma(n + 1) - _sp.digamma(n + m + 1)
                       + _sp.digamma(a + n + m) + _sp.digamma(b + n + m)) * wn

    total = _log_series(w, term_m, lambda n: (a + m + n - 1) * (b + m + n - 1) / (n * (n + m)),
                        1.0 / math.factorial(m))
    return finite - (-w) ** m * _sp.gamma(c) * ga * total


def _log_series(w, term_fn, ratio, coef0):
    """Sum term_fn(n, coef_n, w^n) with coef_n = coef_{n-1} * ratio(n), per element."""
    total = term_fn(0, coef0, np.ones_like(w))
    active = np.ones(w.shape, dtype=bool)
    coef = coef0
    wn = np.ones_like(w)
    for n in range(1, _HYP_MAX_TERMS):
        coef *= ratio(n)
        wn = wn * w
        term = term_fn(n, coef, wn)
        total = np.where(active, total + term, total)
        if n > 2:
            active &= ~(np.abs(term) <= _HYP_EPS * np.abs(total))
        if not active.any():
            return total
    raise DomainError("hypergeometric log series did not converge")


def _hyp_dispatch(a, b, c, z):
    out = np.empty_like(z)
    small = np.abs(z) <= 0.5
    if np.any(small):
        out[small] = _hyp_series(a, b, c, z[small])
    mid_neg = (z < -0.5) & (z >= -1.0)
    far_neg = z < -1.0
    neg = mid_neg | far_neg
    if np.any(neg):
        # Pfaff: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1))
        zn = z[neg]
        wz = zn / (zn - 1.0)
        out[neg] = (1.0 - zn) ** (-a) * _hyp_dispatch(a, c - b, c, wz)
    near_one = (z > 0.5) & (z < 1.0)
    if np.any(near_one):
        out[near_one] = _hyp_one_minus_z(a, b, c, z[near_one])
    at_one = z == 1.0
    if np.any(at_one):
        out[at_one] = (_sp.gamma(c) * _sp.gamma(c - a - b)
                       * _sp.rgamma(c - a) * _sp.rgamma(c - b))
    return out


def hyp2f1(a, b, c, z):
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 1.

    Uses the power series for |z| <= 1/2, the Pfaff transformation for
    negative z, and the connection formulas around z = 1 (including the
    logarithmic cases where c - a - b is an integer).  At z = 1 Gauss's
    summation theorem is used, which requires c - a - b > 0.
    """
    a, b, c = float(a), float(b), float(c)
    if _is_nonpos_int(c):
        raise DomainError(f"c = {c:g} is a nonpositive integer")
    arr, scalar = _as_float_array(z)
    if not np.all(np.isfinite(arr)):
        raise DomainError("hyp2f1 argument must be finite")
    flat = arr.reshape(-1)
    if _is_nonpos_int(a) or _is_nonpos_int(b):
        out = _hyp_poly(a, b, c, flat)
    else:
        if np.any(flat > 1.0):
            raise DomainError("hyp2f1 argument z > 1 is outside the real branch")
        if np.any(flat == 1.0) and not c - a - b > 0:
            raise DomainError("hyp2f1 diverges at z = 1 when c - a - b <= 0")
        out = _hyp_dispatch(a, b, c, flat)
    out = out.reshape(arr.shape)
    return float(out) if scalar else out


# Quadrature ------------------------------------------------------------------

_X21, _W21 = np.polynomial.legendre.leggauss(21)
_X10, _W10 = np.polynomial.legendre.leggauss(10)
_NODES = np.concatenate([_X21, _X10])
_N_HI = _X21.size
RULE_SIZE = _NODES.size
RULE_DEGREE = 2 * _N_HI - 1


@dataclass(frozen=True)
class QuadResult:
    value: float
    est_error: float
    evaluations: int


def _weighted_sum(y, weights, start):
    acc = y[:, start] * weights[0]
    for j in range(1, weights.size):
        acc = acc + y[:, start + j] * weights[j]
    return acc


def quad_batch(f, a, b, tol=1e-10, max_intervals=20000):
    """Adaptive Gauss-Legendre quadrature for many integrals at once.

    Row i integrates over [a[i], b[i]].  ``f(t, rows)`` receives nodes ``t`` of
    shape (k, n) and the row index of each of the k intervals, and returns an
    array of shape (k, n) or (k, n, p) for p simultaneous components.  Each row
    is refined independently (21-point Gauss value, error estimated against
    the 10-point rule), so a row's result is identical whatever else is in
    the batch.

    Returns ``(values, errors, evaluations, failed)``; ``failed`` marks rows
    whose subdivision budget ran out or whose integrand was not finite.
    """
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    m = a.size
    span = np.abs(b - a)
    errors = np.zeros(m)
    evals = np.zeros(m, dtype=np.int64)
    intervals = np.zeros(m, dtype=np.int64)
    failed = np.zeros(m, dtype=bool)
    values = None

    live = span > 0
    lo, hi, rows = a[live], b[live], np.nonzero(live)[0]
    while rows.size:
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        t = mid[:, None] + half[:, None] * _NODES[None, :]
        y = np.asarray(f(t, rows), dtype=float)
        if values is None:
            values = np.zeros((m,) + y.shape[2:])
        g_hi = _weighted_sum(y, _W21, 0) * (half if y.ndim == 2 else half[:, None])
        g_lo = _weighted_sum(y, _W10, _N_HI) * (half if y.ndim == 2 else half[:, None])
        diff = np.abs(g_hi - g_lo)
        if diff.ndim > 1:
            diff = diff.max(axis=tuple(range(1, diff.ndim)))
        evals_k = np.full(rows.size, RULE_SIZE)
        np.add.at(evals, rows, evals_k)
        np.add.at(intervals, rows, 1)
        bad = ~np.isfinite(diff)
        if bad.any():
            failed[rows[bad]] = True
        local_tol = tol * np.abs(hi - lo) / span[rows]
        tiny = np.abs(hi - lo) <= 1e-13 * span[rows]
        over = intervals[rows] >= max_intervals
        failed[rows[over & (diff > local_tol)]] = True
        accept = (diff <= local_tol) | tiny | over | bad | failed[rows]
        if accept.any():
            np.add.at(values, rows[accept], g_hi[accept])
            np.add.at(errors, rows[accept], np.where(bad[accept], np.inf, diff[accept]))
        refine = ~accept
        lo, hi, mid, rows = lo[refine], hi[refine], mid[refine], rows[refine]
        lo, hi, rows = (np.concatenate([lo, mid]), np.concatenate([mid, hi]),
                        np.concatenate([rows, rows]))
        # keep each row's children in a history-determined order
        order = np.argsort(rows, kind="stable")
        lo, hi, rows = lo[order], hi[order], rows[order]
    if values is None:
        values = np.zeros(m)
    return values, errors, evals, failed


def adaptive_quad(f, a, b, tol=1e-10, max_intervals=20000):
    """Integrate a real function over [a, b] to absolute tolerance ``tol``.

    ``f`` may be vectorized (called with numpy arrays) or plain scalar; a
    scalar callable is detected and evaluated node by node.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")

    probe = np.array([a, b], dtype=float)
    try:
        out = np.asarray(f(probe), dtype=float)
        vectorized = out.shape == probe.shape
    except Exception:
        vectorized = False
    if vectorized:
        g = f
    else:
        def g(t):
            return np.array([float(f(v)) for v in np.ravel(t)]).reshape(np.shape(t))

    values, errors, evals, failed = quad_batch(
        lambda t, rows: g(t), [a], [b], tol, max_intervals)
    if failed[0]:
        raise AccuracyError(
            f"quadrature did not converge on [{a}, {b}]", est_error=float(errors[0]))
    return QuadResult(float(values[0]), float(errors[0]), int(evals[0]))


def central_diff(f, x, h):
    """Symmetric difference quotient (f(x+h) - f(x-h)) / (2h)."""
    if not h > 0:
        raise DomainError("step h must be positive")
    return (f(x + h) - f(x - h)) / (2.0 * h)
