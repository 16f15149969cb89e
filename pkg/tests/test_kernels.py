"""Parity between the compiled kernels and their pure-Python twins.

Both backends implement the same algorithms; dot products accumulate in
different orders, so degenerate ties may break differently.  Parity is
therefore checked on results that are invariant to tie-breaking: solution
counts, grid sets, LP status, and optimal objective values.
"""

from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from sudoku_l1._kernels import backend_names, exact_py, simplex_py
from sudoku_l1.puzzle import parse_puzzle
from sudoku_l1.system import build_system

_exact_cy = pytest.importorskip("sudoku_l1._kernels._exact_cy")
_simplex_cy = pytest.importorskip("sudoku_l1._kernels._simplex_cy")

FIG1 = (
    "040600005000070100000000802000021000090000030"
    "000008000000400070105000000200000000"
)


def _flat(text: str) -> np.ndarray:
    return np.array([int(ch) for ch in text], dtype=np.int64)


def test_default_build_prefers_compiled_backends():
    names = backend_names()
    assert names == {"exact": "_exact_cy", "simplex": "_simplex_cy"}


def test_env_override_selects_pure_python():
    out = subprocess.run(
        [
            sys.executable,
            "-c",
            "from sudoku_l1._kernels import backend_names;"
            "print(sorted(backend_names().values()))",
        ],
        env={**os.environ, "SUDOKU_L1_PURE_PYTHON": "1"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert "['exact_py', 'simplex_py']" in out.stdout


def test_exact_backends_agree_on_counts():
    cases = [
        (np.zeros(16, dtype=np.int64), 2, 300),  # all 288 grids
        (_flat(FIG1), 3, 3),  # unique completion
        (_flat("6" + "0" * 80), 3, 5),  # wide open, cap binds
    ]
    for grid, order, cap in cases:
        n_py, sol_py = exact_py.count_completions(grid, order, cap)
        n_cy, sol_cy = _exact_cy.count_completions(grid, order, cap)
        assert n_py == n_cy
        if n_py == 1:
            assert np.array_equal(sol_py, sol_cy)


def test_exact_backends_agree_on_zero_count():
    # no duplicated clue, yet infeasible: row 1 still needs a 4, but its only
    # open cell (1,4) shares a box with the 4 at (2,3)
    grid = np.array([1, 2, 3, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0], dtype=np.int64)
    assert exact_py.count_completions(grid, 2, 2)[0] == 0
    assert _exact_cy.count_completions(grid, 2, 2)[0] == 0


def test_exact_backends_reject_duplicated_clues_alike():
    grid = np.zeros(16, dtype=np.int64)
    grid[0], grid[1] = 1, 1
    with pytest.raises(ValueError):
        exact_py.count_completions(grid, 2, 2)
    with pytest.raises(ValueError):
        _exact_cy.count_completions(grid, 2, 2)


def test_exact_backends_enumerate_the_same_grid_set():
    empty = np.zeros(16, dtype=np.int64)
    a = exact_py.enumerate_completions(empty, 2, 300)
    b = _exact_cy.enumerate_completions(empty, 2, 300)
    assert a.shape == b.shape == (288, 16)
    assert {tuple(row) for row in a} == {tuple(row) for row in b}


def _simplex_case(AT, b, c, lo, up):
    out_py = simplex_py.solve(AT, b, c, lo, up)
    out_cy = _simplex_cy.solve(AT, b, c, lo, up)
    assert out_py["status"] == out_cy["status"]
    if out_py["status"] == simplex_py.OPTIMAL:
        assert out_py["objective"] == pytest.approx(out_cy["objective"], abs=1e-8)
        for out in (out_py, out_cy):
            x = np.asarray(out["x"])
            assert np.max(np.abs(AT.T @ x - b)) < 1e-7
    return out_py, out_cy


def test_simplex_backends_agree_on_small_lp():
    # min -x1 - 2 x2 st x1 + x2 = 1, 0 <= x <= 1
    AT = np.array([[1.0], [1.0]])
    _simplex_case(AT, np.array([1.0]), np.array([-1.0, -2.0]), np.zeros(2), np.ones(2))


def test_simplex_backends_agree_on_infeasible_lp():
    AT = np.array([[1.0, 1.0], [1.0, 1.0]])
    b = np.array([0.0, 1.0])  # x1+x2 = 0 and = 1
    out_py = simplex_py.solve(AT, b, np.ones(2), np.zeros(2), np.ones(2))
    out_cy = _simplex_cy.solve(AT, b, np.ones(2), np.zeros(2), np.ones(2))
    assert out_py["status"] == out_cy["status"] == simplex_py.INFEASIBLE


def test_simplex_backends_agree_on_sudoku_relaxation():
    sys_ = build_system(parse_puzzle(FIG1))
    AT = np.ascontiguousarray(sys_.A.to_dense().T)
    n = sys_.A.n_cols
    out_py, out_cy = _simplex_case(
        AT, sys_.b, np.ones(n), np.zeros(n), np.full(n, np.inf)
    )
    # every feasible point of the relaxation has coordinate sum 81
    assert out_py["objective"] == pytest.approx(81.0, abs=1e-8)


def test_simplex_backends_agree_on_random_objectives():
    sys_ = build_system(parse_puzzle(FIG1))
    AT = np.ascontiguousarray(sys_.A.to_dense().T)
    n = sys_.A.n_cols
    rng = np.random.default_rng(4)
    for _ in range(3):
        c = rng.uniform(-1.0, 1.0, size=n)
        _simplex_case(AT, sys_.b, c, np.zeros(n), np.ones(n))
