import numpy as np
import pytest

from clcauchy.pairs import BasePoint
from clcauchy.systems import make_system

# base point and an interior box (r1 range, r2 range) where every pair
# evaluator is regular; free-value ranges for the two base lines
PAIR_CASES = {
    "plasticity": dict(base=(0.0, 1.0), box=((-0.3, 0.5), (0.8, 1.6)),
                       on_r1=(0.2, 1.8), on_r2=(-0.8, 0.7)),
    "coulomb": dict(base=(0.0, 0.5), box=((0.0, 0.6), (0.1, 0.7)),
                    on_r1=(-0.5, 1.5), on_r2=(-0.8, 0.7)),
    "heat": dict(base=(1.0, 1.5), box=((0.7, 1.5), (0.8, 2.2)),
                 on_r1=(0.6, 2.5), on_r2=(0.5, 2.0)),
    "gas": dict(base=(0.0, 1.2), box=((-0.4, 0.4), (0.6, 1.8)),
                on_r1=(0.1, 1.1), on_r2=(0.1, 1.1)),
    "beam": dict(base=(3.0, 1.0), box=((2.5, 3.5), (0.5, 1.5)),
                 on_r1=(1.1, 2.9), on_r2=(1.1, 2.9)),
    "born_infeld": dict(base=(-0.5, 0.4), box=((-0.6, 0.0), (0.2, 0.7)),
                        on_r1=(-0.2, 0.3), on_r2=(-0.2, 0.3)),
}


def pair_case(name):
    c = PAIR_CASES[name]
    return make_system(name), BasePoint(*c["base"]), c


def interior_points(name, n, seed=0):
    (a1, b1), (a2, b2) = PAIR_CASES[name]["box"]
    rng = np.random.default_rng(seed)
    return rng.uniform(a1, b1, n), rng.uniform(a2, b2, n)


@pytest.fixture(params=sorted(PAIR_CASES))
def system_name(request):
    return request.param


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
