"""The sparse binary system A·x = b behind a puzzle.

Every cell/digit pair (r, c, d) gets one 0/1 variable at column
idx(r, c, d) = side²·(r−1) + side·(c−1) + (d−1) (zero-based).  Rows are
emitted in a fixed order — cell constraints, row-unit, column-unit, box,
then one singleton row per clue — so two builds of the same puzzle are
byte-identical and the clue-free prefix is shared by all puzzles of a side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from . import config
from .puzzle import CellRef, ConstraintViolation, Puzzle, validate

ENCODING_NOTE = "idx(r,c,d) = side^2*(r-1) + side*(c-1) + (d-1), zero-based"


class IncompletePuzzle(ValueError):
    """Raised when a complete grid is required but empty cells remain."""


def column_index(side: int, row: int, col: int, digit: int) -> int:
    """Column of the (row, col, digit) indicator; all arguments 1-based."""
    return side * side * (row - 1) + side * (col - 1) + (digit - 1)


@dataclass(frozen=True)
class IndicatorVector:
    """A point in [0,1]^(side³); ``binary`` flags exact 0/1 membership."""

    values: np.ndarray
    binary: bool = False

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        side = round(len(v) ** (1 / 3))
        if side**3 != len(v):
            raise ValueError(f"length {len(v)} is not a cube")
        if v.min() < -1e-9 or v.max() > 1 + 1e-9:
            raise ValueError("entries must lie in [0, 1]")
        if self.binary:
            if not np.all((v < 1e-9) | (np.abs(v - 1) < 1e-9)):
                raise ValueError("binary vector has fractional entries")
            if int(np.sum(v > 0.5)) != side * side:
                raise ValueError("binary vector must have side² ones")

    @property
    def side(self) -> int:
        return round(len(self.values) ** (1 / 3))


@dataclass(frozen=True)
class SparseBinaryMatrix:
    """0/1 matrix stored as per-row sorted column-index tuples."""

    n_rows: int
    n_cols: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n_rows:
            raise ValueError("row count mismatch")
        for cols in self.rows:
            if any(not 0 <= j < self.n_cols for j in cols):
                raise ValueError("column index out of range")
            if any(a >= b for a, b in zip(cols, cols[1:])):
                raise ValueError("row columns must be strictly increasing")

    @property
    def nnz(self) -> int:
        return sum(len(cols) for cols in self.rows)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n_cols,):
            raise ValueError(f"expected shape ({self.n_cols},), got {x.shape}")
        return np.array([x[list(cols)].sum() for cols in self.rows])

    def to_dense(self) -> np.ndarray:
        """Dense float64 copy (rows × cols); fine at this problem scale."""
        out = np.zeros((self.n_rows, self.n_cols))
        for i, cols in enumerate(self.rows):
            out[i, list(cols)] = 1.0
        return out


@dataclass(frozen=True)
class ConstraintSystem:
    """A, b, and the puzzle they were built from; b is all ones."""

    A: SparseBinaryMatrix
    puzzle: Puzzle
    encoding: str = field(default=ENCODING_NOTE)

    @property
    def b(self) -> np.ndarray:
        return np.ones(self.A.n_rows)


def build_system(p: Puzzle) -> ConstraintSystem:
    """Assemble the constraint matrix for ``p`` in the fixed row order."""
    conflicts = validate(p)
    if conflicts:
        raise ConstraintViolation("; ".join(conflicts))
    side, bo = p.side, p.box_order
    idx = lambda r, c, d: column_index(side, r, c, d)  # noqa: E731
    rows: list[tuple[int, ...]] = []
    # (a) each cell holds exactly one digit
    for r in range(1, side + 1):
        for c in range(1, side + 1):
            rows.append(tuple(idx(r, c, d) for d in range(1, side + 1)))
    # (b) each digit appears once per row
    for r in range(1, side + 1):
        for d in range(1, side + 1):
            rows.append(tuple(idx(r, c, d) for c in range(1, side + 1)))
    # (c) each digit appears once per column
    for c in range(1, side + 1):
        for d in range(1, side + 1):
            rows.append(tuple(idx(r, c, d) for r in range(1, side + 1)))
    # (d) each digit appears once per box (boxes in row-major order)
    for br in range(bo):
        for bc in range(bo):
            cells = [
                (br * bo + i + 1, bc * bo + j + 1)
                for i in range(bo)
                for j in range(bo)
            ]
            for d in range(1, side + 1):
                rows.append(tuple(sorted(idx(r, c, d) for r, c in cells)))
    # (e) one singleton row per clue, clues in row-major order
    for cell in p.clue_cells():
        rows.append((idx(cell.row, cell.col, p.value(cell)),))
    A = SparseBinaryMatrix(len(rows), side**3, tuple(rows))
    return ConstraintSystem(A, p)


def encode_solution(p: Puzzle) -> IndicatorVector:
    """Binary indicator of a complete grid: one 1 per cell at idx(r,c,digit)."""
    if not p.is_complete:
        raise IncompletePuzzle(f"grid has {len(p.empty_cells())} empty cells")
    conflicts = validate(p)
    if conflicts:
        raise ConstraintViolation("; ".join(conflicts))
    side = p.side
    x = np.zeros(side**3)
    for r in range(1, side + 1):
        for c in range(1, side + 1):
            x[column_index(side, r, c, p.cells[r - 1][c - 1])] = 1.0
    return IndicatorVector(x, binary=True)


@dataclass(frozen=True)
class AmbiguousCell:
    """A cell whose indicator slice is not a clean 0/1 pattern."""

    cell: CellRef
    profile: tuple[tuple[int, float], ...]  # (digit, value), descending value


@dataclass(frozen=True)
class FractionalReport:
    """Why an indicator vector could not be read back as a grid."""

    side: int
    ambiguous: tuple[AmbiguousCell, ...]
    nonzero_count: int  # entries above the decode tolerance, whole vector


def decode_indicator(
    x: IndicatorVector | np.ndarray,
    side: int,
    tol: float = config.DECODE_TOL,
) -> Puzzle | FractionalReport:
    """Read ``x`` back as a grid, refusing to round ambiguous cells.

    A cell decodes only when exactly one digit exceeds 1 − tol and the rest
    stay below tol; otherwise the cell is reported with its value profile.
    """
    v = x.values if isinstance(x, IndicatorVector) else np.asarray(x, dtype=np.float64)
    if v.shape != (side**3,):
        raise ValueError(f"expected length {side**3}, got {v.shape}")
    bo = math.isqrt(side)
    if bo * bo != side:
        raise ValueError(f"side {side} is not a perfect square")
    cells = []
    bad: list[AmbiguousCell] = []
    for r in range(1, side + 1):
        row = []
        for c in range(1, side + 1):
            base = column_index(side, r, c, 1)
            slice_ = v[base : base + side]
            high = np.flatnonzero(slice_ > 1 - tol)
            low_ok = np.all((slice_ < tol) | (slice_ > 1 - tol))
            if len(high) == 1 and low_ok:
                row.append(int(high[0]) + 1)
            else:
                profile = sorted(
                    ((d + 1, float(val)) for d, val in enumerate(slice_) if val > tol),
                    key=lambda t: (-t[1], t[0]),
                )
                bad.append(AmbiguousCell(CellRef(r, c), tuple(profile)))
                row.append(0)
        cells.append(tuple(row))
    if bad:
        return FractionalReport(side, tuple(bad), int(np.sum(v > tol)))
    return Puzzle(bo, tuple(cells))


def residual_inf_norm(A: SparseBinaryMatrix, x, b) -> float:
    """max_i |(A·x − b)_i|; raises on shape mismatch."""
    x = np.asarray(x, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (A.n_rows,):
        raise ValueError(f"expected b of shape ({A.n_rows},), got {b.shape}")
    return float(np.max(np.abs(A.matvec(x) - b))) if A.n_rows else 0.0


def dump_matrix(A: SparseBinaryMatrix, stream: IO[str]) -> None:
    """Write 'rows cols nnz' then one 'row col' line per nonzero, sorted."""
    stream.write(f"{A.n_rows} {A.n_cols} {A.nnz}\n")
    for i, cols in enumerate(A.rows):
        for j in cols:
            stream.write(f"{i} {j}\n")
