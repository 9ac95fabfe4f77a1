import math

import numpy as np
import pytest

from clcauchy.errors import ConfigError
from clcauchy.scenarios import (MikhlinParams, mikhlin_boundary_state, mikhlin_contour,
                                mikhlin_solver_theta, mikhlin_tangent, scenario, scenario_names)

P = MikhlinParams()


def test_contour_examples():
    gm = P.gamma_m
    assert gm == pytest.approx(math.atan(3 / 4))
    x, y, br = mikhlin_contour(P, 0.0)
    assert (x, y, br) == (3.0, 0.0, 3)
    x, y, br = mikhlin_contour(P, math.pi - gm)
    assert (x, y) == (pytest.approx(-4.0, abs=1e-12), pytest.approx(3.0, abs=1e-12)) and br == 4
    x, y, br = mikhlin_contour(P, math.pi / 2)
    assert (x, y) == (pytest.approx(0.0, abs=1e-12), 3.0) and br == 2


def test_boundary_state_examples():
    s0 = mikhlin_boundary_state(P, 0.0)
    assert (s0.u, s0.v) == (-1.0, pytest.approx(-math.pi / 4))
    s1 = mikhlin_boundary_state(P, math.pi)
    assert (s1.u, s1.v) == (-1.0, pytest.approx(3 * math.pi / 4))
    s2 = mikhlin_boundary_state(P, math.pi / 2)
    assert s2.v == pytest.approx(math.pi / 4)
    assert P.sigma == -(P.p + P.k)


def test_stadium_closes_and_turns_once():
    t = np.linspace(-P.gamma_m, 2 * math.pi - P.gamma_m, 4001)
    x, y, _ = mikhlin_contour(P, t, "stadium")
    assert x[0] == pytest.approx(x[-1], abs=1e-12) and y[0] == pytest.approx(y[-1], abs=1e-12)
    dx, dy = mikhlin_tangent(P, t, "stadium")
    turn = np.sum(np.diff(np.unwrap(np.arctan2(dy, dx))))
    assert turn == pytest.approx(2 * math.pi, abs=1e-6)
    # straight segments are y = +-r for |x| <= a
    top = mikhlin_contour(P, np.linspace(P.gamma_m + 0.01, math.pi - P.gamma_m - 0.01, 50), "stadium")
    assert np.all(top[1] == P.r) and np.all(np.abs(top[0]) <= P.a)


def test_tangent_matches_position():
    t = np.linspace(-1.4, 1.4, 29) + 1e-3
    h = 1e-6
    for variant in ("printed", "stadium"):
        xp, yp, _ = mikhlin_contour(P, t + h, variant)
        xm, ym, _ = mikhlin_contour(P, t - h, variant)
        dx, dy = mikhlin_tangent(P, t, variant)
        assert np.allclose((xp - xm) / (2 * h), dx, atol=1e-6)
        assert np.allclose((yp - ym) / (2 * h), dy, atol=1e-6)


def test_solver_theta_is_continuous_and_matches_table():
    t = np.linspace(-1.5, 1.5, 3001)
    th = mikhlin_solver_theta(P, t)
    assert np.max(np.abs(np.diff(th))) < 0.01
    for tt in (0.3, 1.0, 1.5):
        assert th[np.argmin(np.abs(t - tt))] == pytest.approx(
            mikhlin_boundary_state(P, float(t[np.argmin(np.abs(t - tt))])).v, abs=1e-12)


def test_registry():
    s, c = scenario("mikhlin")
    assert s.name == "plasticity" and s.params["k"] == 0.5
    s, c = scenario("gas-smooth")
    r1, r2 = c.invariants(np.array([0.0, 1.0]))
    assert np.allclose(r1, [0, 0.25]) and np.allclose(r2, [1, 1.25])
    s, c = scenario("bi-linear")
    assert s.name == "born_infeld"
    r1, r2 = c.invariants(np.array([0.5]))
    assert (r1[0], r2[0]) == (1.5, 0.5)
    s, c = scenario("mikhlin", a=5.0, t0=-1.0, t1=1.0)
    assert c.param_range == (-1.0, 1.0)
    assert "constant-born-infeld" in scenario_names()
    with pytest.raises(ConfigError, match="mikhlin"):
        scenario("no-such")


@pytest.mark.parametrize("name", ["mikhlin", "gas-smooth", "bi-linear", "beam-impact",
                                  "plasticity-smooth", "coulomb-smooth", "heat-smooth"])
def test_every_scenario_solves(name):
    from clcauchy.cauchy import build_field
    s, c = scenario(name)
    f = build_field(s, c, 5, 5)
    assert f.points() and not f.report.foldovers
