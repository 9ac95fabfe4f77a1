import math

import numpy as np
import pytest

from clcauchy.errors import DomainError, SingularityError
from clcauchy.pairs import (BasePoint, ProblemKind, base_conditions_residual, beam_pair_direct,
                            cl2_residual, gas_rho2, heat_phi, pair, pair_arrays)
from clcauchy.systems import RiemannPoint, make_system

from conftest import interior_points, pair_case


def test_plasticity_corner_value():
    s = make_system("plasticity")
    b = BasePoint(0.0, 1.0)
    v0 = (b.r2_0 - b.r1_0) / 2
    cp = pair(s, ProblemKind.X, RiemannPoint(0.0, 1.0), b)
    assert cp.phi == pytest.approx(-math.sin(2 * v0) / 2, abs=1e-12)
    assert cp.psi == pytest.approx(math.cos(v0) ** 2, abs=1e-12)


def test_born_infeld_closed_form():
    s = make_system("born_infeld")
    for base in (BasePoint(0.0, 0.0), BasePoint(-3.0, 7.0)):
        cp = pair(s, "x", RiemannPoint(2.0, 1.0), base)
        assert (cp.phi, cp.psi) == (1.0, 2.0)
    cp = pair(s, "y", RiemannPoint(2.0, 1.0), BasePoint(0.0, 0.0))
    assert (cp.phi, cp.psi) == (1.0, 2.0)


def test_kernel_unity_at_base():
    g = make_system("gas", gamma=2).params
    for kind in ProblemKind:
        rho2, _ = gas_rho2(kind, np.array([0.0]), np.array([1.2]), np.array([0.0]),
                           np.array([1.2]), g["alpha"], g["beta"], g["K"])
        # psi/lambda1 - phi = 1 normalizes the y-kernel to lambda1 = 0.3 at the base
        expected = 1.0 if kind is ProblemKind.X else 0.25 * 1.2
        assert rho2[0] == pytest.approx(expected, abs=1e-14)
        big_phi, _ = heat_phi(kind, np.array([1.0]), np.array([1.5]), np.array([1.0]),
                              np.array([1.5]))
        expected = 1.0 if kind is ProblemKind.X else math.sqrt(2 / 3)
        assert big_phi[0] == pytest.approx(expected, abs=1e-14)


def test_cl2_examples():
    bi = make_system("born_infeld")
    for kind in ProblemKind:
        r = cl2_residual(bi, kind, RiemannPoint(0.7, -0.2), BasePoint(0.0, 0.0))
        assert max(map(abs, r)) <= 1e-9
    r = cl2_residual(make_system("plasticity"), "x", RiemannPoint(0.3, 0.9), BasePoint(0.0, 1.0))
    assert max(map(abs, r)) <= 1e-5
    r = cl2_residual(make_system("gas", gamma=2), "x", RiemannPoint(0.2, 1.0), BasePoint(0.0, 1.2))
    assert max(map(abs, r)) <= 1e-5


@pytest.mark.filterwarnings("ignore:invalid value")  # discarded half crosses a vertical tangent
def test_base_condition_examples():
    pl = make_system("plasticity")
    ra, _ = base_conditions_residual(pl, "x", BasePoint(0.0, 1.0), np.linspace(0.2, 1.8, 25))
    _, rb = base_conditions_residual(pl, "x", BasePoint(0.0, 1.0), np.linspace(-0.8, 0.7, 25))
    assert max(np.abs(ra).max(), np.abs(rb).max()) <= 1e-8
    bi = make_system("born_infeld")
    ra, _ = base_conditions_residual(bi, "x", BasePoint(-0.5, 0.4), np.linspace(-0.2, 0.3, 25))
    assert np.abs(ra).max() <= 1e-15
    co = make_system("coulomb", alpha=math.pi / 3)
    ra, _ = base_conditions_residual(co, "x", BasePoint(0.0, 0.5), np.linspace(-0.5, 1.5, 25))
    _, rb = base_conditions_residual(co, "x", BasePoint(0.0, 0.5), np.linspace(-0.8, 0.7, 25))
    assert max(np.abs(ra).max(), np.abs(rb).max()) <= 1e-8


@pytest.mark.parametrize("kind", list(ProblemKind))
def test_all_systems_base_and_cl2(system_name, kind):
    s, base, case = pair_case(system_name)
    ra, _ = base_conditions_residual(s, kind, base, np.linspace(*case["on_r1"], 20))
    _, rb = base_conditions_residual(s, kind, base, np.linspace(*case["on_r2"], 20))
    assert max(np.abs(ra).max(), np.abs(rb).max()) <= 1e-7
    r1, r2 = interior_points(system_name, 15, seed=1)
    for a, b in zip(r1, r2):
        res = cl2_residual(s, kind, RiemannPoint(a, b), base)
        assert max(map(abs, res)) <= 1e-5


def test_beam_two_paths_agree():
    r1, r2 = interior_points("beam", 30, seed=2)
    for kind in ProblemKind:
        phi, psi = pair_arrays(make_system("beam"), kind, r1, r2, 3.0, 1.0)
        phi2, psi2 = beam_pair_direct(kind, r1, r2, 3.0, 1.0)
        assert np.allclose(phi, phi2, atol=1e-9) and np.allclose(psi, psi2, atol=1e-9)


def test_pair_arrays_deterministic_per_element():
    s = make_system("gas")
    r1, r2 = interior_points("gas", 40, seed=5)
    phi, psi = pair_arrays(s, "x", r1, r2, 0.0, 1.2)
    phi7, psi7 = pair_arrays(s, "x", r1[7:8], r2[7:8], 0.0, 1.2)
    assert phi7[0] == phi[7] and psi7[0] == psi[7]


def test_singularity_and_kind_errors():
    bi = make_system("born_infeld")
    with pytest.raises(SingularityError):
        pair(bi, "x", RiemannPoint(0.3, 0.3), BasePoint(0.0, 0.0))
    with pytest.raises(DomainError):
        ProblemKind.parse("z")
    with pytest.raises(DomainError):
        cl2_residual(bi, "x", RiemannPoint(0.7, 0.1), BasePoint(0.0, 0.0), h=0.0)


def test_tabulated_beam_has_no_closed_form_pair():
    sig = np.linspace(0.2, 4.0, 30)
    tab = make_system("beam", wave_speed=(sig, np.sqrt(sig)))
    with pytest.raises(DomainError):
        pair(tab, "x", RiemannPoint(3.0, 1.0), BasePoint(3.0, 1.0))
