import math

import numpy as np
import pytest

from clcauchy.errors import DegeneracyError, DomainError
from clcauchy.laplace import (Equation, PairingCase, det_const_pair_residual, hodograph_residual,
                              lambda_jet, lambda_relation_residual, laplace_invariants,
                              pairing_constant, plasticity_hodograph, closed_form_factor,
                              simplest_case_pairing, w_residual)
from clcauchy.systems import SYSTEM_NAMES, RiemannPoint, make_system, sample_states


def points(sys, n=5, seed=0):
    u, v = sample_states(sys, n, seed)
    r1, r2 = sys.to_inv(u, v)
    return [RiemannPoint(float(a), float(b)) for a, b in zip(r1, r2)]


def test_gas_invariants():
    s = make_system("gas", gamma=2)
    for pt in points(s):
        d = float(np.subtract(*s.lam(pt.r1, pt.r2)))
        expected = -0.75 * 0.25 / d ** 2
        for eq in Equation:
            li = laplace_invariants(s, eq, pt)
            assert li.h == pytest.approx(expected, abs=1e-6)
            assert li.k == pytest.approx(expected, abs=1e-6)
    # at a point with lambda1 - lambda2 = 1 the value is -alpha*beta = -3/16
    li = laplace_invariants(s, "eq_x", RiemannPoint(0.0, 2.0))
    assert li.h == pytest.approx(-3 / 16, abs=1e-6) and li.k == pytest.approx(-3 / 16, abs=1e-6)


def test_born_infeld_zero():
    s = make_system("born_infeld")
    for pt in points(s):
        for eq in Equation:
            li = laplace_invariants(s, eq, pt)
            assert abs(li.h) <= 1e-8 and abs(li.k) <= 1e-8


def test_exact_jet_matches_fd():
    for name in ("gas", "born_infeld"):
        s = make_system(name)
        pt = points(s, 1, seed=2)[0]
        a = laplace_invariants(s, "eq_phi", pt, exact=True)
        b = laplace_invariants(s, "eq_phi", pt)
        assert a.h == pytest.approx(b.h, abs=1e-7) and a.k == pytest.approx(b.k, abs=1e-7)


def test_plasticity_against_closed_form():
    s = make_system("plasticity")
    pt = RiemannPoint(0.0, math.pi / 4)
    li = laplace_invariants(s, "eq_x", pt)
    # independent evaluation from the coefficient formulas with analytic lambda derivatives
    v = (pt.r2 - pt.r1) / 2
    l1, l2 = math.tan(v), -1 / math.tan(v)
    l1_1, l1_2 = -0.5 / math.cos(v) ** 2, 0.5 / math.cos(v) ** 2
    l2_1, l2_2 = -0.5 / math.sin(v) ** 2, 0.5 / math.sin(v) ** 2
    d = l1 - l2
    c1, c2 = -l2_2 / d, l1_1 / d
    # derivatives of c1 wrt r1 and c2 wrt r2 by the quotient rule
    l2_21 = 0.5 * math.cos(v) / math.sin(v) ** 3           # d(l2_2)/dr1
    l1_12 = -0.5 * math.sin(v) / math.cos(v) ** 3          # d(l1_1)/dr2
    c1_1 = -(l2_21 * d - l2_2 * (l1_1 - l2_1)) / d ** 2
    c2_2 = (l1_12 * d - l1_1 * (l1_2 - l2_2)) / d ** 2
    assert li.h == pytest.approx(c1_1 + c1 * c2, abs=1e-6)
    assert li.k == pytest.approx(c2_2 + c1 * c2, abs=1e-6)


def test_lambda_relation():
    assert lambda_relation_residual(make_system("gas"), RiemannPoint(0.1, 1.3)) == pytest.approx(0, abs=1e-8)
    assert lambda_relation_residual(make_system("born_infeld"), RiemannPoint(-0.3, 0.4)) == pytest.approx(0, abs=1e-8)
    v = math.pi / 8
    pt = RiemannPoint(0.2 - v, 0.2 + v)
    expected = 4 / math.sin(2 * v) ** 3 * (math.cos(2 * v) / math.sin(2 * v))
    assert lambda_relation_residual(make_system("plasticity"), pt) == pytest.approx(expected, rel=1e-6)


def test_cross_identities_all_systems():
    for name in SYSTEM_NAMES:
        s = make_system(name)
        for pt in points(s, 3, seed=7):
            x = laplace_invariants(s, "eq_x", pt)
            p = laplace_invariants(s, "eq_phi", pt)
            assert x.h == pytest.approx(p.k, abs=1e-6)
            assert x.k == pytest.approx(p.h, abs=1e-6)


def test_closed_form_factors():
    gas = make_system("gas", gamma=2)
    for pt in points(gas):
        assert max(map(abs, w_residual(gas, closed_form_factor(gas), pt))) <= 1e-6
    bi = make_system("born_infeld")
    for pt in points(bi):
        assert max(map(abs, w_residual(bi, closed_form_factor(bi), pt))) <= 1e-6
    with pytest.raises(DomainError):
        closed_form_factor(make_system("heat"))


def test_constant_lambda_w_one_is_exact():
    s = make_system("plasticity")
    const = s.__class__(**{**s.__dict__,
                           "lam": lambda r1, r2: (np.zeros_like(r1) + 2.0, np.zeros_like(r2) - 1.0)})
    res = w_residual(const, lambda r1, r2: np.ones_like(r1), RiemannPoint(0.1, 0.4))
    assert res == (0.0, 0.0, 0.0)


def test_w_must_be_positive():
    s = make_system("gas")
    with pytest.raises(DomainError):
        w_residual(s, lambda r1, r2: -np.ones_like(r1), RiemannPoint(0.1, 1.3))


def test_degeneracy_detected():
    s = make_system("plasticity")
    same = s.__class__(**{**s.__dict__, "lam": lambda r1, r2: (r1 + r2, r1 + r2)})
    with pytest.raises(DegeneracyError):
        laplace_invariants(same, "eq_x", RiemannPoint(0.1, 0.4))
    with pytest.raises(DomainError):
        lambda_jet(s, RiemannPoint(0.1, 0.4), h_fd=0)


def test_pairing_classification():
    assert simplest_case_pairing(make_system("plasticity")) is PairingCase.DET_CONST
    assert pairing_constant(make_system("plasticity")) == -1.0
    assert simplest_case_pairing(make_system("heat")) is PairingCase.ANTISYMMETRIC
    assert simplest_case_pairing(make_system("beam")) is PairingCase.ANTISYMMETRIC
    assert simplest_case_pairing(make_system("gas", gamma=2)) is PairingCase.GENERAL
    assert pairing_constant(make_system("gas")) is None
    assert Equation.parse("phi") is Equation.EQ_PHI


@pytest.mark.parametrize("kind", ["exponential", "bessel"])
def test_plasticity_hodograph_solutions(kind):
    s = make_system("plasticity")
    xy = plasticity_hodograph(kind, p=0.7)
    for pt in (RiemannPoint(0.1, 0.9), RiemannPoint(0.4, 1.2), RiemannPoint(0.2, 0.6)):
        assert max(map(abs, hodograph_residual(s, xy, pt))) <= 1e-7
        assert max(map(abs, det_const_pair_residual(s, xy, pt))) <= 1e-7
