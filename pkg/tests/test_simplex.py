from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from sgspec.simplex import feasible, solve_lp

F = Fraction


def test_trivial_equality():
    # min x subject to x + y = 1, 0 <= x,y <= 1
    res = solve_lp([[1, 1]], [1], [1, 0], [0, 0], [1, 1])
    assert res.status == "optimal"
    assert res.objective == 0
    assert res.x == [F(0), F(1)]


def test_infeasible_bounds():
    res = solve_lp([[1, 1]], [3], [0, 0], [0, 0], [1, 1])
    assert res.status == "infeasible"


def test_fixed_columns_substituted():
    # x fixed to 2 by its bounds; remaining system y = 1
    res = solve_lp([[1, 1]], [3], [0, 1], [2, 0], [2, 5])
    assert res.status == "optimal"
    assert res.x == [F(2), F(1)]


def test_exact_boundary_feasibility():
    # y = 1/3 is feasible only at the exact boundary of its box
    res = feasible([[3]], [1], [F(1, 3)], [F(1, 3)])
    assert res.status == "optimal"
    res = feasible([[3]], [1], [F(1, 3) + F(1, 10**12)], [F(1)])
    assert res.status == "infeasible"


def test_negative_rhs():
    res = solve_lp([[1, -1]], [-2], [0, 0], [-1, -1], [1, 3])
    assert res.status == "optimal"
    assert res.x[0] - res.x[1] == -2


def test_degenerate_rows():
    # duplicated row must not confuse phase 1
    res = solve_lp([[1, 1], [1, 1]], [1, 1], [1, 1], [0, 0], [1, 1])
    assert res.status == "optimal"
    assert res.objective == 1


def test_zero_row_consistency():
    assert feasible([[0, 0]], [0], [0, 0], [1, 1]).status == "optimal"
    assert feasible([[0, 0]], [1], [0, 0], [1, 1]).status == "infeasible"


def _random_lp(rng, m, n):
    a = rng.integers(-3, 4, size=(m, n))
    lo = rng.integers(-3, 1, size=n)
    hi = lo + rng.integers(0, 4, size=n)
    c = rng.integers(-4, 5, size=n)
    if rng.random() < 0.7:
        # guaranteed feasible: b from a random point in the box
        x0 = np.array([rng.integers(l, h + 1) for l, h in zip(lo, hi)])
        b = a @ x0
    else:
        b = rng.integers(-6, 7, size=m)
    return a, b, c, lo, hi


@pytest.mark.parametrize("seed", range(8))
def test_random_lps_against_reference_solver(seed):
    rng = np.random.default_rng(seed)
    for _ in range(40):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(1, 6))
        a, b, c, lo, hi = _random_lp(rng, m, n)
        res = solve_lp(a.tolist(), b.tolist(), c.tolist(), lo.tolist(), hi.tolist())
        ref = linprog(c, A_eq=a, b_eq=b, bounds=list(zip(lo, hi)), method="highs")
        if ref.status == 2:
            assert res.status == "infeasible"
            continue
        assert ref.status == 0
        assert res.status == "optimal"
        assert abs(float(res.objective) - ref.fun) < 1e-7
        # exact constraint satisfaction of the returned point
        x = res.x
        for i in range(m):
            assert sum(F(int(a[i, j])) * x[j] for j in range(n)) == F(int(b[i]))
        for j in range(n):
            assert F(int(lo[j])) <= x[j] <= F(int(hi[j]))


def test_rational_coefficients_exact():
    # min t with x/3 + t = 1/7, x in [-1, 1], t in [0, 1]
    res = solve_lp(
        [[F(1, 3), 1]], [F(1, 7)], [0, 1], [F(-1), F(0)], [F(1), F(1)]
    )
    assert res.status == "optimal"
    assert res.objective == 0
    assert res.x[0] == F(3, 7)
