"""Cross-checks of the in-repo simplex against scipy.optimize.linprog."""
import numpy as np
import pytest
from scipy.optimize import linprog

from framespaces._simplex import max_min_slack, solve_lp_max


def scipy_max(c, G, h):
    res = linprog(-np.asarray(c, float), A_ub=G, b_ub=h, bounds=[(None, None)] * len(c))
    return res


def test_basic_box():
    r = solve_lp_max([1, 1], [[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 2, 0, 0])
    assert r.status == "optimal"
    assert r.value == pytest.approx(3.0)


def test_infeasible():
    assert solve_lp_max([1], [[1], [-1]], [1, -2]).status == "infeasible"


def test_unbounded():
    assert solve_lp_max([1], [[-1]], [0]).status == "unbounded"


def test_degenerate_vertex():
    # three constraints meeting at the optimum; Bland's rule must not cycle
    G = [[1, 0], [0, 1], [1, 1], [-1, 0], [0, -1]]
    h = [1, 1, 2, 0, 0]
    r = solve_lp_max([1, 1], G, h)
    assert r.status == "optimal"
    assert r.value == pytest.approx(2.0)


def test_max_min_slack_square():
    r = max_min_slack([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 1, 1, 1])
    assert r.status == "optimal"
    assert r.value == pytest.approx(1.0)
    assert np.allclose(r.y[:2], [0, 0], atol=1e-9)


def test_max_min_slack_degenerate_segment():
    # feasible set is the segment x = 0, -1 <= y <= 1: no interior, slack 0
    r = max_min_slack([[1, 0], [-1, 0], [0, 1], [0, -1]], [0, 0, 1, 1])
    assert r.status == "optimal"
    assert r.value == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("seed", range(40))
def test_random_against_scipy(seed):
    rng = np.random.default_rng(seed)
    n = rng.integers(1, 6)
    m = rng.integers(1, 12)
    G = rng.standard_normal((m, n))
    h = rng.standard_normal(m)
    c = rng.standard_normal(n)
    mine = solve_lp_max(c, G, h)
    ref = scipy_max(c, G, h)
    if ref.status == 2:
        assert mine.status == "infeasible"
    elif ref.status == 3:
        assert mine.status == "unbounded"
    else:
        assert mine.status == "optimal"
        assert mine.value == pytest.approx(-ref.fun, rel=1e-6, abs=1e-7)
        assert np.all(G @ mine.y <= h + 1e-7)


@pytest.mark.parametrize("seed", range(20))
def test_random_feasible_against_scipy(seed):
    # constraints built around a known interior point so feasibility is guaranteed
    rng = np.random.default_rng(100 + seed)
    n = rng.integers(1, 6)
    m = rng.integers(n + 1, n + 10)
    x0 = rng.standard_normal(n)
    G = rng.standard_normal((m, n))
    h = G @ x0 + rng.uniform(0.1, 2.0, size=m)
    # box to keep it bounded
    G = np.vstack([G, np.eye(n), -np.eye(n)])
    h = np.concatenate([h, np.abs(x0) + 5.0, np.abs(x0) + 5.0])
    c = rng.standard_normal(n)
    mine = solve_lp_max(c, G, h)
    ref = scipy_max(c, G, h)
    assert mine.status == "optimal" and ref.status == 0
    assert mine.value == pytest.approx(-ref.fun, rel=1e-6, abs=1e-7)
