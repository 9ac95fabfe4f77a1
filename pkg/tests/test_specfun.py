import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clcauchy.errors import AccuracyError, DomainError, RangeError
from clcauchy.specfun import (KERNEL_Q_MAX, adaptive_quad, central_diff, hyp2f1,
                              kernel_i0, kernel_i0_dq, quad_batch)


def series_i0(q, terms=60):
    # sum (q/4)^m / (m!)^2
    s, t = 0.0, 1.0
    for m in range(terms):
        if m:
            t *= (q / 4) / (m * m)
        s += t
    return s


def series_i0_dq(q, terms=60):
    # d/dq of the above: sum_{m>=1} m q^(m-1) / (4^m (m!)^2)
    return sum(m * q ** (m - 1) / (4.0 ** m * math.factorial(m) ** 2) for m in range(1, terms))


@pytest.mark.parametrize("q, expected", [(0.0, 1.0), (4.0, 2.2795853023360673),
                                         (-4.0, 0.22389077914123567)])
def test_kernel_examples(q, expected):
    assert kernel_i0(q) == pytest.approx(expected, abs=1e-12)
    assert kernel_i0(q) == pytest.approx(series_i0(q), abs=1e-12)


def test_kernel_dq_examples():
    assert kernel_i0_dq(0.0) == 0.25
    # I1(2)/4; the commonly quoted 0.39765921321285416 is off in the tenth digit
    assert kernel_i0_dq(4.0) == pytest.approx(float(mpmath.besseli(1, 2)) / 4, abs=1e-12)
    assert kernel_i0_dq(4.0) == pytest.approx(series_i0_dq(4.0), abs=1e-12)
    ref = float(mpmath.besselj(1, 2) / 2 / 2)  # d/dq J0(sqrt(-q)) = J1(s)/(2s)
    assert kernel_i0_dq(-4.0) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("q", [-1e6, -5e4, -2e3, -50.0, -3.0, 0.7, 30.0, 900.0, 5e3, 2e4, 1e5])
def test_kernel_against_mpmath(q):
    s = mpmath.sqrt(abs(q))
    if q >= 0:
        v, d = mpmath.besseli(0, s), mpmath.besseli(1, s) / (2 * s)
    else:
        v, d = mpmath.besselj(0, s), mpmath.besselj(1, s) / (2 * s)
    assert kernel_i0(q) == pytest.approx(float(v), rel=1e-11, abs=1e-13)
    assert kernel_i0_dq(q) == pytest.approx(float(d), rel=1e-10, abs=1e-13)


@pytest.mark.parametrize("q", [-1e4 - 7, -40.0, -4.0, 0.0, 4.0, 50.0, 600.0, 2e4])
def test_kernel_derivative_matches_fd(q):
    h = 1e-5 * max(1.0, math.sqrt(abs(q)))
    fd = central_diff(kernel_i0, q, h)
    assert abs(fd - kernel_i0_dq(q)) <= 1e-8 * max(1.0, abs(kernel_i0_dq(q)))


def test_kernel_range_error():
    with pytest.raises(RangeError):
        kernel_i0(KERNEL_Q_MAX * 2)
    with pytest.raises(DomainError):
        kernel_i0_dq(float("nan"))


def test_kernel_vectorized_matches_scalar():
    q = np.array([-5e4, -10.0, 0.0, 3.0, 700.0, 3e4])
    v = kernel_i0(q)
    assert np.array_equal(v, np.array([kernel_i0(float(x)) for x in q]))


def test_hyp2f1_examples():
    for K in (0.3, 1.7, -2.5):
        assert hyp2f1(K, K + 1, 1, 0.0) == 1.0
    assert hyp2f1(-0.5, 0.5, 1, 1.0) == pytest.approx(2 / math.pi, abs=1e-10)
    z = 0.5
    term, s = 1.0, 1.0
    for n in range(200):
        term *= (-0.5 + n) * (0.5 + n) / ((1 + n) * (n + 1)) * z
        s += term
    assert hyp2f1(-0.5, 0.5, 1, 0.5) == pytest.approx(s, abs=1e-14)


@pytest.mark.parametrize("a,b,c", [(0.75, 0.25, 1.0), (-0.5, 0.5, 1.0), (1.5, 1.5, 3.0),
                                   (0.5, 0.5, 1.0), (2.0, 1.0, 3.0), (0.3, 0.9, 1.1)])
@pytest.mark.parametrize("z", [-30.0, -3.0, -0.7, 0.2, 0.55, 0.9, 0.999])
def test_hyp2f1_against_mpmath(a, b, c, z):
    ref = float(mpmath.hyp2f1(a, b, c, z))
    assert hyp2f1(a, b, c, z) == pytest.approx(ref, rel=1e-11, abs=1e-13)


def test_hyp2f1_domain_errors():
    with pytest.raises(DomainError):
        hyp2f1(0.5, 0.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        hyp2f1(0.5, 0.5, -2.0, 0.1)
    with pytest.raises(DomainError):
        hyp2f1(0.5, 0.5, 1.0, 1.5)


def test_quad_examples():
    assert adaptive_quad(lambda t: t, 0, 1, 1e-10).value == pytest.approx(0.5, abs=1e-14)
    assert adaptive_quad(np.sin, 0, math.pi, 1e-10).value == pytest.approx(2.0, abs=1e-12)
    # composite Simpson oracle
    n = 20000
    t = np.linspace(0, 1, n + 1)
    f = kernel_i0(t)
    simpson = (f[0] + f[-1] + 4 * f[1:-1:2].sum() + 2 * f[2:-1:2].sum()) / (3 * n)
    assert adaptive_quad(kernel_i0, 0, 1, 1e-10).value == pytest.approx(simpson, abs=1e-11)


def test_quad_scalar_callable():
    res = adaptive_quad(lambda t: math.exp(t), 0, 1, 1e-12)
    assert res.value == pytest.approx(math.e - 1, abs=1e-13)
    assert res.evaluations > 0


def test_quad_accuracy_error():
    with pytest.raises(AccuracyError) as err:
        adaptive_quad(lambda t: 1 / np.sqrt(np.abs(t - 0.3)), 0, 1, 1e-14, max_intervals=10)
    assert err.value.est_error > 0


def test_quad_batch_row_independence():
    f = lambda t, rows: np.cos(t * (1 + rows[:, None]))
    a = np.zeros(5)
    b = np.linspace(1, 3, 5)
    full, *_ = quad_batch(f, a, b)
    for i in range(5):
        one, *_ = quad_batch(lambda t, rows: np.cos(t * (1 + i)), a[i:i + 1], b[i:i + 1])
        assert one[0] == full[i]


def test_central_diff_examples():
    assert central_diff(lambda t: t * t, 1.0, 1e-4) == pytest.approx(2.0, abs=1e-8)
    assert central_diff(math.sin, 0.0, 1e-5) == pytest.approx(1.0, abs=1e-10)
    assert central_diff(kernel_i0, 4.0, 1e-5) == pytest.approx(kernel_i0_dq(4.0), abs=1e-8)
    with pytest.raises(DomainError):
        central_diff(math.sin, 0.0, 0.0)


@settings(max_examples=200, deadline=None)
@given(q=st.floats(-400, 400))
def test_kernel_series_property(q):
    assert kernel_i0(q) == pytest.approx(float(mpmath.besseli(0, mpmath.sqrt(q)).real)
                                         if q >= 0 else float(mpmath.besselj(0, mpmath.sqrt(-q))),
                                         rel=1e-11, abs=1e-13)


@settings(max_examples=100, deadline=None)
@given(z=st.floats(-50, 0.99))
def test_hyp2f1_property(z):
    a, b, c = 0.75, 0.25, 1.0
    assert hyp2f1(a, b, c, z) == pytest.approx(float(mpmath.hyp2f1(a, b, c, z)), rel=1e-11)
