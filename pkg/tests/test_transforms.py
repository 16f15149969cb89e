"""Validity-preserving grid symmetries and classification invariance."""

from __future__ import annotations

import random

import pytest

from sudoku_l1.puzzle import Puzzle, parse_puzzle, solve_exact, validate
from sudoku_l1.transforms import (
    Symmetry,
    apply_symmetry,
    identity_symmetry,
    random_symmetry,
)
from sudoku_l1.uniqueness import classify


def test_identity_symmetry_fixes_every_grid(fig1):
    assert apply_symmetry(fig1, identity_symmetry(3)) == fig1


def test_transpose_only():
    p = parse_puzzle("12" + "0" * 79)
    sym = Symmetry(
        box_order=3,
        transpose=True,
        row_perm=tuple(range(9)),
        col_perm=tuple(range(9)),
        relabel=tuple(range(1, 10)),
    )
    q = apply_symmetry(p, sym)
    flat = [q.value(c) if q.value(c) else 0 for c in _all_cells(q)]
    assert flat[0] == 1 and flat[9] == 2  # (1,2) moved to (2,1)


def _all_cells(p: Puzzle):
    from sudoku_l1.puzzle import CellRef

    return [
        CellRef(r, c) for r in range(1, p.side + 1) for c in range(1, p.side + 1)
    ]


def test_relabel_only(fig1):
    relabel = (9, 8, 7, 6, 5, 4, 3, 2, 1)
    sym = Symmetry(
        box_order=3,
        transpose=False,
        row_perm=tuple(range(9)),
        col_perm=tuple(range(9)),
        relabel=relabel,
    )
    q = apply_symmetry(fig1, sym)
    for cell in fig1.clue_cells():
        assert q.value(cell) == relabel[fig1.value(cell) - 1]


def test_band_breaking_row_perm_is_rejected():
    # rows 1 and 4 live in different bands; swapping them is not allowed
    perm = [3, 1, 2, 0, 4, 5, 6, 7, 8]
    with pytest.raises(ValueError):
        Symmetry(
            box_order=3,
            transpose=False,
            row_perm=tuple(perm),
            col_perm=tuple(range(9)),
            relabel=tuple(range(1, 10)),
        )


def test_bad_relabel_is_rejected():
    with pytest.raises(ValueError):
        Symmetry(
            box_order=3,
            transpose=False,
            row_perm=tuple(range(9)),
            col_perm=tuple(range(9)),
            relabel=(1, 1, 3, 4, 5, 6, 7, 8, 9),
        )


def test_random_symmetry_is_deterministic():
    a = random_symmetry(random.Random(5), 3)
    b = random_symmetry(random.Random(5), 3)
    assert a == b


def test_symmetry_preserves_validity_and_clue_count(fig1):
    rng = random.Random(3)
    for _ in range(10):
        q = apply_symmetry(fig1, random_symmetry(rng, 3))
        assert not validate(q)
        assert len(q.clue_cells()) == len(fig1.clue_cells())


def test_symmetry_preserves_completion_count():
    p = parse_puzzle(
        "000000080060803140000510000040000200502040000"
        "980300007009020806800070000076000000"
    )
    rng = random.Random(9)
    base = solve_exact(p, count_cap=2).solution_count
    for _ in range(5):
        q = apply_symmetry(p, random_symmetry(rng, 3))
        assert solve_exact(q, count_cap=2).solution_count == base


def test_symmetry_commutes_with_completion(typei_puzzle):
    sym = random_symmetry(random.Random(17), 3)
    completed_then_mapped = apply_symmetry(
        solve_exact(typei_puzzle, count_cap=2).completion, sym
    )
    mapped_then_completed = solve_exact(
        apply_symmetry(typei_puzzle, sym), count_cap=2
    ).completion
    assert completed_then_mapped == mapped_then_completed


@pytest.mark.parametrize("seed", [0, 1])
def test_classification_is_symmetry_invariant(fig1, typei_puzzle, seed):
    rng = random.Random(seed)
    for p in (fig1, typei_puzzle):
        base = classify(p)
        q = apply_symmetry(p, random_symmetry(rng, 3))
        image = classify(q)
        assert image.label is base.label
        assert image.certificate.residual == pytest.approx(
            base.certificate.residual, abs=1e-7
        )


def test_shidoku_symmetry():
    p = Puzzle.from_flat([1, 2, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1], 2)
    rng = random.Random(2)
    sym = random_symmetry(rng, 2)
    q = apply_symmetry(p, sym)
    assert q.box_order == 2
    assert len(q.clue_cells()) == len(p.clue_cells())
