"""Uniqueness certificates, classification, and key-cell search."""

from __future__ import annotations

import random

import numpy as np
import pytest

from sudoku_l1 import config
from sudoku_l1.puzzle import Puzzle, parse_puzzle, enumerate_completions, solve_exact
from sudoku_l1.solvers import solve_p1
from sudoku_l1.system import IndicatorVector, build_system, encode_solution
from sudoku_l1.uniqueness import (
    ClassLabel,
    NotBinary,
    NotFeasible,
    NotTypeII,
    NotUniquelyCompletable,
    certify_uniqueness,
    classify,
    find_key_cells,
)


def _empty_shidoku() -> Puzzle:
    return Puzzle.from_flat([0] * 16, box_order=2)


def test_fully_clued_grid_is_type_i(typei_puzzle):
    completion = solve_exact(typei_puzzle, count_cap=2).completion
    result = classify(completion)
    assert result.label is ClassLabel.TYPE_I
    assert result.certificate.unique
    assert result.certificate.rank_ok
    assert result.certificate.residual < config.CERT_RESIDUAL_TOL


def test_typei_fixture_classifies_type_i(typei_puzzle):
    result = classify(typei_puzzle)
    assert result.label is ClassLabel.TYPE_I
    assert result.certificate.residual < 1e-6


def test_fig1_classifies_type_ii(fig1):
    result = classify(fig1)
    assert result.label is ClassLabel.TYPE_II
    assert result.certificate.rank_ok  # rank holds; the multiplier program fails
    assert result.certificate.residual >= config.CERT_RESIDUAL_TOL * 99


def test_cross_check_finds_alternative_on_fig1(fig1):
    result = classify(fig1, cross_check=True, draws=10, seed=0)
    assert result.cross_check is not None
    assert result.cross_check.alternative_found
    # the search stops at the first alternative point
    assert result.cross_check.draws <= 10
    assert result.cross_check.max_deviation > config.ALT_SOLUTION_TOL


def test_cross_check_is_quiet_on_type_i(typei_puzzle):
    result = classify(typei_puzzle, cross_check=True, draws=5, seed=0)
    assert result.label is ClassLabel.TYPE_I
    assert not result.cross_check.alternative_found
    assert result.cross_check.draws == 5
    assert result.cross_check.max_deviation <= config.ALT_SOLUTION_TOL


def test_epsilon_must_lie_in_unit_interval(typei_puzzle):
    completion = solve_exact(typei_puzzle, count_cap=2).completion
    sys = build_system(completion)
    x = encode_solution(completion)
    for bad in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValueError):
            certify_uniqueness(sys, x, epsilon=bad)


def test_certificate_rejects_fractional_vector():
    p = _empty_shidoku()
    sys = build_system(p)
    x = IndicatorVector(np.full(64, 0.25))
    with pytest.raises(NotBinary):
        certify_uniqueness(sys, x)


def test_certificate_rejects_infeasible_vector():
    grid = enumerate_completions(_empty_shidoku(), cap=1)[0]
    sys = build_system(_empty_shidoku())
    vals = encode_solution(grid).values.copy()
    # move cell (1,1)'s indicator to a different digit: still sixteen ones,
    # but a digit now repeats inside row 1
    on = int(np.flatnonzero(vals[:4])[0])
    vals[on] = 0.0
    vals[(on + 1) % 4] = 1.0
    x = IndicatorVector(vals, binary=True)
    with pytest.raises(NotFeasible):
        certify_uniqueness(sys, x)


def test_classify_requires_unique_completion():
    with pytest.raises(NotUniquelyCompletable):
        classify(_empty_shidoku())


def test_key_cells_require_type_ii(typei_puzzle):
    with pytest.raises(NotTypeII):
        find_key_cells(typei_puzzle)


@pytest.fixture(scope="module")
def fig1_key_report(fig1):
    return find_key_cells(fig1, p1=solve_p1(fig1))


def test_fig1_key_cell_sweep_shape(fig1, fig1_key_report):
    report = fig1_key_report
    empties = fig1.empty_cells()
    assert len(report.per_cell) == len(empties) == 64
    assert [e.cell for e in report.per_cell] == empties
    assert report.key_cells
    assert set(report.key_cells) <= set(empties)


def test_fig1_key_cells_carry_large_relaxation_values(fig1_key_report):
    key = set(fig1_key_report.key_cells)
    big = [e for e in fig1_key_report.per_cell if e.cell in key and e.p1_value > 0.5]
    # a sizeable share of the key cells sit on the heavy side of the relaxation
    assert len(big) >= len(key) // 2


def test_augmenting_a_key_cell_yields_type_i(fig1, fig1_key_report):
    completion = solve_exact(fig1, count_cap=2).completion
    cell = fig1_key_report.key_cells[0]
    aug = fig1.with_value(cell, completion.value(cell))
    result = classify(aug)
    assert result.label is ClassLabel.TYPE_I
    assert solve_p1(aug).is_integral


def test_key_cell_workers_preserve_order_and_content(fig1, fig1_key_report):
    threaded = find_key_cells(fig1, workers=4)
    assert threaded.key_cells == fig1_key_report.key_cells
    assert [e.cell for e in threaded.per_cell] == [
        e.cell for e in fig1_key_report.per_cell
    ]
    for a, b in zip(threaded.per_cell, fig1_key_report.per_cell):
        assert a.augmented_label is b.augmented_label
        assert a.augmented_residual == pytest.approx(b.augmented_residual, abs=1e-9)


def _random_unique_shidoku(rng: random.Random, grids: list[Puzzle]) -> Puzzle:
    while True:
        grid = rng.choice(grids)
        cells = grid.clue_cells()
        rng.shuffle(cells)
        keep = cells[: rng.randint(6, 10)]
        flat = [0] * 16
        for cell in keep:
            flat[(cell.row - 1) * 4 + (cell.col - 1)] = grid.value(cell)
        p = Puzzle.from_flat(flat, box_order=2)
        if solve_exact(p, count_cap=2).solution_count == 1:
            return p


def test_certificate_agrees_with_vertex_sampling_on_shidoku():
    grids = enumerate_completions(_empty_shidoku(), cap=300)
    assert len(grids) == 288
    rng = random.Random(20260818)
    for i in range(20):
        p = _random_unique_shidoku(rng, grids)
        result = classify(p, cross_check=True, draws=40, seed=i)
        # unique linear-system solution <=> no alternative vertex exists
        assert result.certificate.unique == (not result.cross_check.alternative_found)
        # empirically every uniquely-completable 4x4 instance is type I
        assert result.label is ClassLabel.TYPE_I


def test_certificate_refutes_uniqueness_on_two_completion_puzzle():
    grids = enumerate_completions(_empty_shidoku(), cap=300)
    pair = next(
        (a, b)
        for i, a in enumerate(grids)
        for b in grids[i + 1 :]
        if sum(a.value(c) != b.value(c) for c in a.clue_cells()) == 4
    )
    a, b = pair
    flat = [
        a.value(c) if a.value(c) == b.value(c) else 0
        for c in a.clue_cells()
    ]
    p = Puzzle.from_flat(flat, box_order=2)
    assert solve_exact(p, count_cap=3).solution_count == 2
    sys = build_system(p)
    cert = certify_uniqueness(sys, encode_solution(a))
    assert not cert.unique
    assert cert.residual >= config.CERT_RESIDUAL_TOL
