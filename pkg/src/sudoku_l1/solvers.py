"""Relaxation-based solving pipelines.

``solve_p1`` runs the plain linear relaxation and reports the analytic
center of the feasible polytope — for uniquely-relaxing puzzles this is the
binary solution itself; otherwise it is the canonical fractional point the
diagnostics and the repair step work from.

``solve_improved`` adds the one-shot adaptive repair: round to four decimal
places, histogram the values in [0.5, 1), promote every index sitting at the
mode of that histogram to a clue, and re-run the relaxation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import config
from .lp import InfeasibleSystem, analytic_center, interior_point, maximal_support
from .puzzle import CellRef, Puzzle, validate
from .system import (
    ConstraintSystem,
    FractionalReport,
    IndicatorVector,
    build_system,
    decode_indicator,
)


class InfeasiblePuzzle(ValueError):
    """The puzzle's constraint system has no feasible point."""


@dataclass(frozen=True)
class P1Result:
    """Relaxation output plus the fractional diagnostics."""

    x: IndicatorVector
    is_integral: bool
    decoded: Puzzle | FractionalReport
    nonzero_count: int  # entries above 1e-6
    half_count: int  # entries within 1e-4 of 0.5


@dataclass(frozen=True)
class ValueHistogramEntry:
    rounded_value: float
    count: int


class RepairStage(Enum):
    SOLVED_DIRECT = "SolvedDirect"
    SOLVED_AFTER_REPAIR = "SolvedAfterRepair"
    FAILED_AFTER_REPAIR = "FailedAfterRepair"
    INFEASIBLE_REPAIR = "InfeasibleRepair"


@dataclass(frozen=True)
class RepairTrace:
    """What the one-shot repair did and where it ended."""

    stage: RepairStage
    threshold: float | None
    promoted_cells: tuple[tuple[CellRef, int], ...]
    dropped_cells: tuple[CellRef, ...]
    final: P1Result


def solve_p1(p: Puzzle) -> P1Result:
    """Solve the linear relaxation; x is the analytic center of the polytope."""
    sys = build_system(p)
    try:
        support, _ = maximal_support(sys)
        x0 = interior_point(sys, support)
    except InfeasibleSystem as exc:
        raise InfeasiblePuzzle(str(exc)) from exc
    x = analytic_center(sys, support, x0)
    decoded = decode_indicator(x, p.side, tol=config.DECODE_TOL)
    is_integral = isinstance(decoded, Puzzle)
    if is_integral and validate(decoded):
        # a decodable grid that breaks a unit constraint is not a solution
        is_integral = False
    v = x.values
    return P1Result(
        x=x,
        is_integral=is_integral,
        decoded=decoded,
        nonzero_count=int(np.sum(v > 1e-6)),
        half_count=int(np.sum(np.abs(v - 0.5) <= 1e-4)),
    )


def value_histogram(x: IndicatorVector | np.ndarray) -> list[ValueHistogramEntry]:
    """Bucket the entries in S = {x_i | 0.5 ≤ x_i < 1} by 4-decimal rounding.

    Values are rounded first, then filtered, so an entry like 0.49997 lands
    in the 0.5 bucket.  Buckets are returned sorted by value.
    """
    v = x.values if isinstance(x, IndicatorVector) else np.asarray(x, dtype=np.float64)
    rounded = np.round(v, config.ROUND_DECIMALS)
    sel = rounded[(rounded >= 0.5) & (rounded < 1.0)]
    counts = Counter(float(val) for val in sel)
    return [
        ValueHistogramEntry(val, counts[val]) for val in sorted(counts)
    ]


def _mode(entries: list[ValueHistogramEntry]) -> float:
    """Multiset mode; ties go to the largest value (values near 1 are the
    likeliest true ones)."""
    best = max(entries, key=lambda e: (e.count, e.rounded_value))
    return best.rounded_value


def _grid_ok(result: P1Result, p: Puzzle) -> bool:
    """Decoded grid is complete, valid, and keeps every original clue."""
    if not result.is_integral or not isinstance(result.decoded, Puzzle):
        return False
    grid = result.decoded
    if not grid.is_complete or validate(grid):
        return False
    return all(grid.value(c) == p.value(c) for c in p.clue_cells())


def solve_improved(p: Puzzle, first: P1Result | None = None) -> RepairTrace:
    """One-shot adaptive-threshold repair around the linear relaxation.

    Promotion threshold t is the mode of the rounded values in [0.5, 1);
    every index at t becomes a clue.  A cell handed two digits at once is
    dropped from promotion (a wrong clue is unrecoverable here), and the
    repair runs at most once.  ``first`` may carry a P1 result already
    computed for ``p`` to skip the initial solve.
    """
    if first is None:
        first = solve_p1(p)
    if _grid_ok(first, p):
        return RepairTrace(RepairStage.SOLVED_DIRECT, None, (), (), first)

    hist = value_histogram(first.x)
    if not hist:
        # nothing in [0.5, 1) to promote: the repair cannot act
        return RepairTrace(RepairStage.FAILED_AFTER_REPAIR, None, (), (), first)
    t = _mode(hist)

    side = p.side
    rounded = np.round(first.x.values, config.ROUND_DECIMALS)
    per_cell: dict[tuple[int, int], list[int]] = {}
    for flat in np.flatnonzero(rounded == t):
        cell_index, digit0 = divmod(int(flat), side)
        r, c = divmod(cell_index, side)
        per_cell.setdefault((r + 1, c + 1), []).append(digit0 + 1)

    promoted: list[tuple[CellRef, int]] = []
    dropped: list[CellRef] = []
    augmented = p
    for (r, c), digits in sorted(per_cell.items()):
        cell = CellRef(r, c)
        if len(digits) > 1:
            dropped.append(cell)
            continue
        if p.value(cell) != 0:
            continue  # never touch an original clue
        promoted.append((cell, digits[0]))
        augmented = augmented.with_value(cell, digits[0])

    if validate(augmented):
        # the promoted clues contradict each other or the givens
        return RepairTrace(
            RepairStage.INFEASIBLE_REPAIR, t, tuple(promoted), tuple(dropped), first
        )
    try:
        second = solve_p1(augmented)
    except InfeasiblePuzzle:
        return RepairTrace(
            RepairStage.INFEASIBLE_REPAIR, t, tuple(promoted), tuple(dropped), first
        )
    stage = (
        RepairStage.SOLVED_AFTER_REPAIR
        if _grid_ok(second, p)
        else RepairStage.FAILED_AFTER_REPAIR
    )
    return RepairTrace(stage, t, tuple(promoted), tuple(dropped), second)
