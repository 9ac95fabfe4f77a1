import numpy as np
import pytest

from clcauchy.cauchy import build_field, straight_line_curve
from clcauchy.errors import ComparisonError, ConfigError, DegeneracyError
from clcauchy.oracle import compare, convergence_ratios, moc_march
from clcauchy.scenarios import scenario
from clcauchy.systems import make_system


@pytest.mark.parametrize("name", ["plasticity", "gas", "heat"])
def test_constant_data_agree(name):
    s, c = scenario(f"constant-{name}")
    grid = moc_march(s, c, 10)
    field = build_field(s, c, 11, 11)
    rep = compare(field, grid)
    assert rep.matched == 66
    assert rep.max_error <= 1e-12


def test_identical_inputs_give_zero():
    s, c = scenario("gas-smooth")
    grid = moc_march(s, c, 8)
    pts = [p for layer in grid.layers for p in layer]
    rep = compare(pts, grid)
    assert rep.max_error == 0.0 and rep.matched == len(pts)


def test_gas_smooth_converges():
    s, c = scenario("gas-smooth")
    errs = [compare(build_field(s, c, n + 1, n + 1), moc_march(s, c, n)).max_error
            for n in (10, 20, 40)]
    assert errs[2] < errs[1] < errs[0]
    euler = [compare(build_field(s, c, n + 1, n + 1), moc_march(s, c, n, "euler")).max_error
             for n in (10, 20)]
    assert 0.3 <= euler[1] / euler[0] <= 0.7


def test_lattice_labels_share_boundary_samples():
    s, c = scenario("gas-smooth")
    grid = moc_march(s, c, 4)
    assert len(grid.layers) == 5 and [len(l) for l in grid.layers] == [5, 4, 3, 2, 1]
    assert grid.layers[4][0].tau_p == 0.0 and grid.layers[4][0].tau_q == 1.0


def test_parallel_characteristics_raise():
    s = make_system("gas")
    same = s.__class__(**{**s.__dict__, "angles": lambda r1, r2: (np.float64(0.3), np.float64(0.3))})
    c = straight_line_curve((0, 0), (1, 0), lambda t: (np.full(np.shape(t), 1.0),
                                                      np.full(np.shape(t), 0.5)))
    with pytest.raises(DegeneracyError):
        moc_march(same, c, 3)


def test_errors():
    s, c = scenario("gas-smooth")
    with pytest.raises(ConfigError):
        moc_march(s, c, 0)
    with pytest.raises(ConfigError):
        moc_march(s, c, 4, closure="rk4")
    grid = moc_march(s, c, 4)
    with pytest.raises(ComparisonError):
        compare([], grid)


def test_convergence_ratios():
    assert convergence_ratios([4.0, 2.0, 1.0]) == [0.5, 0.5]
    assert convergence_ratios([0.0, 1.0]) == [float("inf")]
