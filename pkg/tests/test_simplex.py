"""Exact simplex: hand-checked optima, status detection, scipy agreement."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from plancut.errors import PreconditionViolated
from plancut.simplex import solve_exact

F = Fraction


def test_single_equality_vertex():
    res = solve_exact([-1, -1], [({0: 1, 1: 1}, "=", 1)])
    assert res.status == "optimal"
    assert res.objective == -1
    assert res.x == (F(1), F(0))


def test_upper_bounds_bind():
    res = solve_exact(
        [-1, -2],
        [({0: 1, 1: 1}, "<=", 3)],
        upper={0: 2, 1: 2},
    )
    assert res.status == "optimal"
    assert res.objective == -5
    assert res.x == (F(1), F(2))


def test_maximize_flag():
    res = solve_exact([1, 2], [({0: 1, 1: 1}, "<=", 3)], upper={0: 2, 1: 2}, maximize=True)
    assert res.status == "optimal"
    # objective is still reported in the original (un-negated) sense
    assert res.objective == 5


def test_infeasible_pair_of_rows():
    res = solve_exact([1, 1], [({0: 1, 1: 1}, "=", 1), ({0: 1, 1: 1}, "=", 2)])
    assert res.status == "infeasible"
    assert res.x is None and res.objective is None


def test_unbounded_direction():
    res = solve_exact([-1, 0], [({1: 1}, "=", 1)])
    assert res.status == "unbounded"


def test_ge_row_and_negative_rhs():
    assert solve_exact([1], [({0: 1}, ">=", 5)]).objective == 5
    # -x <= -3 normalizes to the same feasible set as x >= 3
    assert solve_exact([1], [({0: -1}, "<=", -3)]).objective == 3


def test_redundant_row_is_dropped():
    res = solve_exact([1, 0], [({0: 1, 1: 1}, "=", 1), ({0: 1, 1: 1}, "=", 1)])
    assert res.status == "optimal"
    assert res.objective == 0


def test_degenerate_vertex_terminates():
    res = solve_exact([-1, 0], [({0: 1, 1: -1}, "<=", 0), ({0: 1}, "<=", 1)])
    assert res.status == "optimal"
    assert res.objective == -1


def test_no_rows():
    assert solve_exact([1, 2], []).objective == 0
    assert solve_exact([-1, 2], []).status == "unbounded"


def test_fractional_optimum_is_exact():
    # x0 = x1 and 3 x0 + 2 x1 = 1 meet at exactly 1/5 each
    res = solve_exact(
        [-1, -1],
        [({0: 3, 1: 2}, "=", 1), ({0: 1, 1: -1}, "=", 0)],
    )
    assert res.x == (F(1, 5), F(1, 5))
    assert res.objective == F(-2, 5)


def test_bad_sense_rejected():
    with pytest.raises(PreconditionViolated):
        solve_exact([1], [({0: 1}, "==", 1)])


def test_unknown_variable_rejected():
    with pytest.raises(PreconditionViolated):
        solve_exact([1], [({3: 1}, "=", 1)])


# ---------------------------------------------------------------------------
# randomized agreement with scipy's HiGHS on feasible-by-construction models
# ---------------------------------------------------------------------------


@st.composite
def _feasible_lp(draw):
    n = draw(st.integers(2, 5))
    m = draw(st.integers(1, 3))
    A = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(m)]
    x0 = [draw(st.integers(0, 3)) for _ in range(n)]
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    c = [draw(st.integers(-3, 3)) for _ in range(n)]
    return A, b, c


@given(_feasible_lp())
@settings(max_examples=60, deadline=None)
def test_matches_scipy_on_random_equalities(lp):
    A, b, c = lp
    rows = [({j: v for j, v in enumerate(row)}, "=", rhs) for row, rhs in zip(A, b)]
    mine = solve_exact(c, rows)
    ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    if mine.status == "optimal":
        assert ref.status == 0
        assert abs(float(mine.objective) - ref.fun) <= 1e-7 * max(1.0, abs(ref.fun))
        # the returned point satisfies every row with zero residual
        for coeffs, _, rhs in rows:
            assert sum(F(v) * mine.x[j] for j, v in coeffs.items()) == rhs
        assert all(v >= 0 for v in mine.x)
    elif mine.status == "unbounded":
        assert ref.status == 3
    else:  # infeasible cannot happen: b was built from a feasible point
        raise AssertionError("constructed model reported infeasible")
