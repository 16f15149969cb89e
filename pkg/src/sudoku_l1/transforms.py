"""Validity-preserving puzzle symmetries.

A Sudoku grid stays valid under any combination of: transposition, row
permutations that keep box bands together, column permutations that keep
box stacks together, and relabelling of the digits.  These operations
permute the columns of the constraint system (and its unit rows among
themselves), so they carry completions to completions bijectively —
a puzzle and its image have the same number of completions, the same
uniqueness class, and relaxation values that are permutations of each
other.  That makes symmetry images useful both as structurally distinct
fixtures and as an invariance check on the classification pipeline.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .puzzle import Puzzle


def _is_band_preserving(perm: tuple[int, ...], box_order: int) -> bool:
    side = len(perm)
    if sorted(perm) != list(range(side)):
        return False
    for band in range(box_order):
        members = perm[band * box_order : (band + 1) * box_order]
        if len({m // box_order for m in members}) != 1:
            return False
    return True


@dataclass(frozen=True)
class Symmetry:
    """One element of the validity-preserving group.

    Applied in a fixed order: transpose first, then row and column
    permutations (``row_perm[r]`` is the destination row of source row
    ``r``), then digit relabelling (``relabel[d-1]`` is the image of
    digit ``d``).  Row and column permutations must keep each box band
    or stack intact as a block.
    """

    box_order: int
    transpose: bool
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    relabel: tuple[int, ...]

    def __post_init__(self) -> None:
        side = self.box_order * self.box_order
        if len(self.row_perm) != side or not _is_band_preserving(
            self.row_perm, self.box_order
        ):
            raise ValueError("row_perm must permute rows within and across bands")
        if len(self.col_perm) != side or not _is_band_preserving(
            self.col_perm, self.box_order
        ):
            raise ValueError("col_perm must permute columns within and across stacks")
        if sorted(self.relabel) != list(range(1, side + 1)):
            raise ValueError("relabel must be a permutation of the digits")


def identity_symmetry(box_order: int) -> Symmetry:
    side = box_order * box_order
    return Symmetry(
        box_order=box_order,
        transpose=False,
        row_perm=tuple(range(side)),
        col_perm=tuple(range(side)),
        relabel=tuple(range(1, side + 1)),
    )


def apply_symmetry(p: Puzzle, sym: Symmetry) -> Puzzle:
    if sym.box_order != p.box_order:
        raise ValueError("symmetry and puzzle box orders differ")
    side = p.side
    cells = [list(row) for row in p.cells]
    if sym.transpose:
        cells = [[cells[c][r] for c in range(side)] for r in range(side)]
    moved = [[0] * side for _ in range(side)]
    for r in range(side):
        for c in range(side):
            moved[sym.row_perm[r]][sym.col_perm[c]] = cells[r][c]
    for r in range(side):
        for c in range(side):
            if moved[r][c]:
                moved[r][c] = sym.relabel[moved[r][c] - 1]
    return Puzzle(
        cells=tuple(tuple(row) for row in moved), box_order=p.box_order
    )


def _band_preserving_perm(rng: random.Random, box_order: int) -> tuple[int, ...]:
    bands = list(range(box_order))
    rng.shuffle(bands)
    perm: list[int] = []
    for band in range(box_order):
        inside = list(range(box_order))
        rng.shuffle(inside)
        perm.extend(bands[band] * box_order + i for i in inside)
    return tuple(perm)


def random_symmetry(rng: random.Random, box_order: int) -> Symmetry:
    """A seeded random element of the validity-preserving group."""
    side = box_order * box_order
    relabel = list(range(1, side + 1))
    rng.shuffle(relabel)
    return Symmetry(
        box_order=box_order,
        transpose=rng.random() < 0.5,
        row_perm=_band_preserving_perm(rng, box_order),
        col_perm=_band_preserving_perm(rng, box_order),
        relabel=tuple(relabel),
    )
