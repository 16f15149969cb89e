"""Constraint-matrix construction, encoding, and decoding."""

from __future__ import annotations

import io

import numpy as np
import pytest

from sudoku_l1.puzzle import CellRef, parse_puzzle, solve_exact
from sudoku_l1.system import (
    FractionalReport,
    IncompletePuzzle,
    build_system,
    column_index,
    decode_indicator,
    dump_matrix,
    encode_solution,
    residual_inf_norm,
)
from tests.conftest import FIG1_TEXT, TYPEI_TEXT


def test_seventeen_clue_shape_and_nnz(fig1):
    A = build_system(fig1).A
    assert (A.n_rows, A.n_cols) == (341, 729)
    assert A.nnz == 2933


def test_row_count_formula_tracks_clues():
    for text in ("0" * 81, FIG1_TEXT, TYPEI_TEXT):
        clues = 81 - text.count("0")
        A = build_system(parse_puzzle(text)).A
        assert A.n_rows == 324 + clues
        assert A.nnz == 4 * 729 + clues


def test_clueless_shidoku_shape():
    A = build_system(parse_puzzle("0" * 16, box_order=2)).A
    assert (A.n_rows, A.n_cols) == (64, 64)
    assert A.nnz == 256


def test_base_rows_identical_across_puzzles(fig1, typei_puzzle):
    a = build_system(fig1).A.rows[:324]
    b = build_system(typei_puzzle).A.rows[:324]
    assert a == b


def test_base_rows_have_side_nonzeros_clue_rows_one(fig1):
    A = build_system(fig1).A
    assert all(len(cols) == 9 for cols in A.rows[:324])
    assert all(len(cols) == 1 for cols in A.rows[324:])


def test_b_is_all_ones(fig1):
    sys = build_system(fig1)
    assert np.all(sys.b == 1.0)
    assert sys.b.shape == (341,)


def test_column_index_is_row_major():
    assert column_index(9, 1, 1, 1) == 0
    assert column_index(9, 1, 1, 2) == 1
    assert column_index(9, 1, 2, 1) == 9
    assert column_index(9, 2, 1, 1) == 81
    assert column_index(9, 9, 9, 9) == 728


def test_encode_decode_round_trip(fig1):
    completion = solve_exact(fig1, count_cap=2).completion
    x = encode_solution(completion)
    assert decode_indicator(x.values, 9) == completion


def test_encode_requires_complete_grid(fig1):
    with pytest.raises(IncompletePuzzle):
        encode_solution(fig1)


def test_encoded_solution_satisfies_system(fig1):
    sys = build_system(fig1)
    completion = solve_exact(fig1, count_cap=2).completion
    x = encode_solution(completion)
    assert residual_inf_norm(sys.A, x.values, sys.b) == 0.0


def test_decode_reports_ambiguous_cell():
    x = np.zeros(729)
    x[column_index(9, 1, 1, 1)] = 0.5
    x[column_index(9, 1, 1, 2)] = 0.5
    report = decode_indicator(x, 9)
    assert isinstance(report, FractionalReport)
    named = [a for a in report.ambiguous if a.cell == CellRef(1, 1)]
    assert named and named[0].profile == ((1, 0.5), (2, 0.5))


def test_dump_header_and_base_rows(fig1, typei_puzzle):
    def dumped(p):
        buf = io.StringIO()
        dump_matrix(build_system(p).A, buf)
        return buf.getvalue().splitlines()

    a, b = dumped(fig1), dumped(typei_puzzle)
    assert a[0] == "341 729 2933"
    assert len(a) == 1 + 2933
    # base rows: everything before the first clue row (324 rows × 9 entries)
    assert a[1 : 1 + 324 * 9] == b[1 : 1 + 324 * 9]


def test_dump_shidoku_header():
    buf = io.StringIO()
    dump_matrix(build_system(parse_puzzle("0" * 16, box_order=2)).A, buf)
    assert buf.getvalue().splitlines()[0] == "64 64 256"
