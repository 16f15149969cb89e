"""Grid types, parsing/formatting, validity checking, and the exact solver.

The exact solver is the combinatorial ground truth the relaxation-based
solvers are measured against.  It enumerates completions by backtracking
(bitmask candidate sets, most-constrained-cell-first with singles taken
immediately) and is deterministic: completions are produced in a fixed
traversal order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._kernels import exact

SUPPORTED_BOX_ORDERS = (2, 3)


class PuzzleError(ValueError):
    """Base class for puzzle parsing and validation failures."""


class WrongLength(PuzzleError):
    """The input line does not contain exactly side² cell characters."""


class IllegalCharacter(PuzzleError):
    """The input contains a character outside the digit/'.' alphabet."""


class ConstraintViolation(PuzzleError):
    """A nonzero value repeats within a row, column, or box."""


@dataclass(frozen=True, order=True)
class CellRef:
    """1-based (row, col) reference; ordering is row-major."""

    row: int
    col: int

    def __post_init__(self) -> None:
        if self.row < 1 or self.col < 1:
            raise ValueError(f"cell indices are 1-based, got ({self.row}, {self.col})")


@dataclass(frozen=True)
class Puzzle:
    """A side×side grid, side = box_order²; value 0 marks an empty cell.

    The constructor enforces shape and value range only.  Unit constraints
    (no repeated digit in a row/column/box) are checked by :func:`validate`,
    which must be able to describe grids that violate them; `parse_puzzle`
    rejects such grids outright.
    """

    box_order: int
    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.box_order not in SUPPORTED_BOX_ORDERS:
            raise ValueError(f"unsupported box_order {self.box_order}")
        side = self.side
        if len(self.cells) != side or any(len(row) != side for row in self.cells):
            raise ValueError(f"cells must form a {side}×{side} table")
        for row in self.cells:
            for v in row:
                if not 0 <= v <= side:
                    raise ValueError(f"cell value {v} outside 0..{side}")

    @property
    def side(self) -> int:
        return self.box_order * self.box_order

    @property
    def clue_count(self) -> int:
        return sum(1 for row in self.cells for v in row if v)

    @property
    def is_complete(self) -> bool:
        return all(v for row in self.cells for v in row)

    def value(self, cell: CellRef) -> int:
        return self.cells[cell.row - 1][cell.col - 1]

    def with_value(self, cell: CellRef, digit: int) -> Puzzle:
        """Copy with one cell set; unit conflicts are not checked here."""
        rows = [list(r) for r in self.cells]
        rows[cell.row - 1][cell.col - 1] = digit
        return Puzzle(self.box_order, tuple(tuple(r) for r in rows))

    def empty_cells(self) -> list[CellRef]:
        """All empty cells in row-major order."""
        return [
            CellRef(r + 1, c + 1)
            for r in range(self.side)
            for c in range(self.side)
            if self.cells[r][c] == 0
        ]

    def clue_cells(self) -> list[CellRef]:
        """All filled cells in row-major order."""
        return [
            CellRef(r + 1, c + 1)
            for r in range(self.side)
            for c in range(self.side)
            if self.cells[r][c] != 0
        ]

    def to_flat(self) -> np.ndarray:
        """Row-major int8 vector of length side²."""
        return np.array([v for row in self.cells for v in row], dtype=np.int8)

    @classmethod
    def from_flat(cls, values, box_order: int) -> Puzzle:
        side = box_order * box_order
        flat = [int(v) for v in np.asarray(values).ravel()]
        if len(flat) != side * side:
            raise ValueError(f"expected {side * side} values, got {len(flat)}")
        rows = tuple(tuple(flat[r * side : (r + 1) * side]) for r in range(side))
        return cls(box_order, rows)


class SolveStatus(Enum):
    SOLVED = "Solved"
    INFEASIBLE = "Infeasible"
    MULTIPLE_FOUND = "MultipleFound"


@dataclass(frozen=True)
class SolveOutcome:
    """Result of an exact solve; counts are exact up to the caller's cap."""

    status: SolveStatus
    completion: Puzzle | None
    solution_count: int


def parse_puzzle(text: str, box_order: int = 3) -> Puzzle:
    """Parse one row-major puzzle line; '.' and '0' both mean empty.

    Raises WrongLength, IllegalCharacter, or ConstraintViolation; the
    returned puzzle is always valid.
    """
    if box_order not in SUPPORTED_BOX_ORDERS:
        raise ValueError(f"unsupported box_order {box_order}")
    side = box_order * box_order
    s = text.strip()
    if len(s) != side * side:
        raise WrongLength(f"expected {side * side} characters, got {len(s)}")
    values = []
    for ch in s:
        if ch == ".":
            values.append(0)
        elif ch.isdigit() and int(ch) <= side:
            values.append(int(ch))
        else:
            raise IllegalCharacter(f"{ch!r} is not '.', or a digit in 0..{side}")
    rows = tuple(tuple(values[r * side : (r + 1) * side]) for r in range(side))
    p = Puzzle(box_order, rows)
    conflicts = validate(p)
    if conflicts:
        raise ConstraintViolation("; ".join(conflicts))
    return p


def format_puzzle(p: Puzzle) -> str:
    """Row-major single-line form; empty cells become '0'."""
    return "".join(str(v) for row in p.cells for v in row)


def validate(p: Puzzle) -> list[str]:
    """Describe every (unit, digit) pair that repeats; empty list iff valid."""
    side, bo = p.side, p.box_order
    units: list[tuple[str, list[int]]] = []
    for r in range(side):
        units.append((f"row {r + 1}", [p.cells[r][c] for c in range(side)]))
    for c in range(side):
        units.append((f"column {c + 1}", [p.cells[r][c] for r in range(side)]))
    for br in range(bo):
        for bc in range(bo):
            vals = [
                p.cells[br * bo + i][bc * bo + j] for i in range(bo) for j in range(bo)
            ]
            units.append((f"box {br * bo + bc + 1}", vals))
    conflicts = []
    for label, vals in units:
        seen = [v for v in vals if v]
        for d in sorted(set(seen)):
            k = seen.count(d)
            if k > 1:
                conflicts.append(f"digit {d} appears {k} times in {label}")
    return conflicts


def solve_exact(p: Puzzle, count_cap: int = 2) -> SolveOutcome:
    """Backtracking solve; counts completions exactly, up to ``count_cap``.

    Raises ConstraintViolation if the puzzle itself breaks a unit constraint
    (callers that want a status instead should check ``validate`` first) and
    ValueError for a cap below 1.
    """
    if count_cap < 1:
        raise ValueError("count_cap must be at least 1")
    conflicts = validate(p)
    if conflicts:
        raise ConstraintViolation("; ".join(conflicts))
    count, first = exact.count_completions(p.to_flat(), p.box_order, count_cap)
    if count == 0:
        return SolveOutcome(SolveStatus.INFEASIBLE, None, 0)
    completion = Puzzle.from_flat(first, p.box_order)
    status = SolveStatus.SOLVED if count == 1 else SolveStatus.MULTIPLE_FOUND
    return SolveOutcome(status, completion, count)


def enumerate_completions(p: Puzzle, cap: int) -> list[Puzzle]:
    """All completions of ``p`` in solver traversal order, up to ``cap``."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    conflicts = validate(p)
    if conflicts:
        raise ConstraintViolation("; ".join(conflicts))
    grids = exact.enumerate_completions(p.to_flat(), p.box_order, cap)
    return [Puzzle.from_flat(g, p.box_order) for g in grids]


def is_uniquely_completable(p: Puzzle) -> bool:
    """True iff the puzzle has exactly one completion."""
    out = solve_exact(p, count_cap=2)
    return out.status is SolveStatus.SOLVED and out.solution_count == 1
