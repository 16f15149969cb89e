"""Simplex solver, support detection, interior points, and the center."""

from __future__ import annotations

import numpy as np
import pytest

from sudoku_l1 import config
from sudoku_l1.lp import (
    LinearProgram,
    LpStatus,
    NumericalBreakdown,
    SupportSet,
    analytic_center,
    interior_point,
    maximal_support,
    rank_full_column,
    solve_lp,
)
from sudoku_l1.puzzle import parse_puzzle, solve_exact
from sudoku_l1.system import build_system, column_index, encode_solution


def _lp(c, a, b, lower=None, upper=None):
    a = np.asarray(a, dtype=float)
    n = a.shape[1]
    return LinearProgram(
        c=np.asarray(c, dtype=float),
        A_eq=a,
        b_eq=np.asarray(b, dtype=float),
        lower=np.zeros(n) if lower is None else np.asarray(lower, dtype=float),
        upper=np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float),
    )


def test_simple_optimum():
    # min x1 + 2 x2  s.t.  x1 + x2 = 1, x >= 0  ->  x = (1, 0)
    sol = solve_lp(_lp([1, 2], [[1, 1]], [1]))
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective_value == pytest.approx(1.0)
    assert np.allclose(sol.x, [1, 0])


def test_infeasible_detected():
    # x1 + x2 = -1 with x >= 0 cannot hold
    sol = solve_lp(_lp([1, 1], [[1, 1]], [-1]))
    assert sol.status is LpStatus.INFEASIBLE


def test_unbounded_detected():
    # min -x1 with x1 - x2 = 0: both can grow forever
    sol = solve_lp(_lp([-1, 0], [[1, -1]], [0]))
    assert sol.status is LpStatus.UNBOUNDED


def test_upper_bounds_bind():
    # min -x1 - x2  s.t.  x1 + x2 + s = 3, x <= 1 each -> s = 1
    sol = solve_lp(_lp([-1, -1, 0], [[1, 1, 1]], [3], upper=[1, 1, np.inf]))
    assert sol.status is LpStatus.OPTIMAL
    assert np.allclose(sol.x, [1, 1, 1])


def test_degenerate_problem_terminates():
    # several vertices share the optimum; cycling protection must kick in
    a = [[1, 1, 1, 0], [1, 1, 0, 1]]
    sol = solve_lp(_lp([0, 0, 1, 1], a, [1, 1]))
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective_value == pytest.approx(0.0)


def test_duals_satisfy_complementary_slackness():
    prog = _lp([1, 2, 4], [[1, 1, 0], [0, 1, 1]], [1, 1])
    sol = solve_lp(prog)
    assert sol.status is LpStatus.OPTIMAL
    # reduced costs: c - A^T y, nonnegative at a minimum over x >= 0
    red = np.asarray(sol.reduced_costs)
    assert np.all(red >= -1e-9)
    # and zero on the support of x
    assert np.all(np.abs(red[np.asarray(sol.x) > 1e-9]) <= 1e-9)


def test_reduced_cost_signs_on_sudoku_lp(fig1):
    sys = build_system(fig1)
    n = sys.A.n_cols
    rng = np.random.default_rng(3)
    prog = LinearProgram(
        c=rng.uniform(-1.0, 1.0, size=n),
        A_eq=sys.A,
        b_eq=sys.b,
        lower=np.zeros(n),
        upper=np.ones(n),
    )
    sol = solve_lp(prog)
    assert sol.status is LpStatus.OPTIMAL
    x = np.asarray(sol.x)
    red = np.asarray(sol.reduced_costs)
    tol = 1e-7
    at_lower = x <= 1e-9
    at_upper = x >= 1 - 1e-9
    basicish = ~(at_lower | at_upper)
    assert np.all(red[at_lower] >= -tol)
    assert np.all(red[at_upper] <= tol)
    assert np.all(np.abs(red[basicish]) <= tol)


def test_p1_objective_is_81_on_sudoku(fig1):
    sys = build_system(fig1)
    n = sys.A.n_cols
    prog = LinearProgram(
        c=np.ones(n),
        A_eq=sys.A,
        b_eq=sys.b,
        lower=np.zeros(n),
        upper=np.ones(n),
    )
    sol = solve_lp(prog)
    assert sol.status is LpStatus.OPTIMAL
    assert sol.objective_value == pytest.approx(81.0, abs=1e-7)


def test_support_of_fully_clued_grid_is_the_solution(fig1):
    completion = solve_exact(fig1, count_cap=2).completion
    sys = build_system(completion)
    support, witness = maximal_support(sys)
    x = encode_solution(completion)
    assert support.indices == tuple(np.flatnonzero(x.values > 0.5))
    assert witness.shape == (sys.A.n_cols,)


def test_support_strictly_larger_for_fig1(fig1):
    support, _ = maximal_support(build_system(fig1))
    assert len(support) > 81


def test_interior_point_is_strictly_positive_on_support(fig1):
    sys = build_system(fig1)
    support, _ = maximal_support(sys)
    x = interior_point(sys, support)
    on = np.asarray(support.indices)
    assert np.all(x[on] > 1e-8)
    off = np.setdiff1d(np.arange(sys.A.n_cols), on)
    assert np.all(np.abs(x[off]) <= 1e-12)
    assert np.max(np.abs(sys.A.matvec(x) - sys.b)) <= 1e-8


def test_inconsistent_equalities_are_infeasible():
    prog = _lp([1, 1], [[1, 1], [1, 1]], [1, 2])
    sol = solve_lp(prog)
    assert sol.status is LpStatus.INFEASIBLE


def test_two_completion_center_is_the_midpoint():
    # Blanking a swap rectangle (two digits trading places across two rows
    # and columns) leaves exactly two completions; the polytope is then the
    # segment between them and the barrier peaks at its midpoint, so every
    # affected indicator entry comes out exactly 0.5.
    from sudoku_l1.puzzle import enumerate_completions

    grids = enumerate_completions(parse_puzzle("0" * 16, box_order=2), cap=400)
    pair = None
    for i, g1 in enumerate(grids):
        f1 = g1.to_flat()
        for g2 in grids[i + 1 :]:
            if int(np.sum(f1 != g2.to_flat())) == 4:
                pair = (g1, g2)
                break
        if pair:
            break
    assert pair is not None
    g1, g2 = pair
    f1, f2 = g1.to_flat(), g2.to_flat()
    text = "".join(
        str(int(v)) if v == w else "0" for v, w in zip(f1, f2)
    )
    p = parse_puzzle(text, box_order=2)
    assert solve_exact(p, count_cap=5).solution_count == 2

    sys = build_system(p)
    support, _ = maximal_support(sys)
    x0 = interior_point(sys, support)
    center = analytic_center(sys, support, x0)
    e1 = encode_solution(g1).values
    e2 = encode_solution(g2).values
    differing = np.flatnonzero(e1 != e2)
    assert len(differing) == 8
    assert np.allclose(center.values[differing], 0.5, atol=1e-9)
    agreeing = np.flatnonzero((e1 == e2) & (e1 > 0.5))
    assert np.allclose(center.values[agreeing], 1.0, atol=1e-9)


def test_center_stationarity_on_shidoku():
    # a Shidoku with several completions: projected gradient of the barrier
    # must vanish at the center
    p = parse_puzzle("1000020000300000", box_order=2)
    sys = build_system(p)
    support, _ = maximal_support(sys)
    x0 = interior_point(sys, support)
    center = analytic_center(sys, support, x0)
    on = np.asarray(support.indices)
    v = center.values[on]
    assert np.all(v > 0)
    dense = sys.A.to_dense()[:, on]
    grad = 1.0 / v
    # stationarity: gradient lies in the row space of the support columns
    coef, *_ = np.linalg.lstsq(dense.T, grad, rcond=None)
    assert np.max(np.abs(grad - dense.T @ coef)) <= 1e-6


def test_center_matches_binary_solution_when_unique(typei_puzzle):
    sys = build_system(typei_puzzle)
    support, _ = maximal_support(sys)
    x0 = interior_point(sys, support)
    center = analytic_center(sys, support, x0)
    completion = solve_exact(typei_puzzle, count_cap=2).completion
    assert np.max(np.abs(center.values - encode_solution(completion).values)) <= 1e-8


def test_rank_full_column_on_support(fig1):
    completion = solve_exact(fig1, count_cap=2).completion
    sys = build_system(fig1)
    x = encode_solution(completion)
    dense = sys.A.to_dense()[:, x.values > 0.5]
    assert rank_full_column(dense)
    # duplicate a column and the rank drops
    doubled = np.hstack([dense, dense[:, :1]])
    assert not rank_full_column(doubled)


def test_interior_point_rejects_forced_zero_support():
    from sudoku_l1.system import ConstraintSystem, SparseBinaryMatrix
    from sudoku_l1.puzzle import Puzzle

    # x1 = 1 and x1 + x2 = 1 force x2 = 0: no strictly positive point exists
    # on the claimed support, which only a miscomputed support set produces
    A = SparseBinaryMatrix(n_rows=2, n_cols=2, rows=((0,), (0, 1)))
    sys = ConstraintSystem(A=A, puzzle=Puzzle.from_flat([0] * 16, 2))
    with pytest.raises(NumericalBreakdown):
        interior_point(sys, SupportSet(indices=(0, 1)))
