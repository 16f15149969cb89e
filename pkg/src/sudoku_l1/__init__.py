"""Sudoku as a sparse binary linear system.

Formulates puzzles as A·x = b over 0/1 indicator vectors, solves the linear
relaxation, certifies when the relaxation's optimum is unique, pinpoints the
cells whose value pins the solution down, and repairs fractional solutions
with an adaptive threshold.
"""

from .puzzle import (
    CellRef,
    ConstraintViolation,
    IllegalCharacter,
    Puzzle,
    PuzzleError,
    SolveOutcome,
    SolveStatus,
    WrongLength,
    enumerate_completions,
    format_puzzle,
    is_uniquely_completable,
    parse_puzzle,
    solve_exact,
    validate,
)
from .solvers import (
    InfeasiblePuzzle,
    P1Result,
    RepairStage,
    RepairTrace,
    ValueHistogramEntry,
    solve_improved,
    solve_p1,
    value_histogram,
)
from .system import (
    AmbiguousCell,
    ConstraintSystem,
    FractionalReport,
    IncompletePuzzle,
    IndicatorVector,
    SparseBinaryMatrix,
    build_system,
    column_index,
    decode_indicator,
    dump_matrix,
    encode_solution,
    residual_inf_norm,
)
from .uniqueness import (
    CertificateResult,
    ClassLabel,
    CrossCheck,
    KeyCellEntry,
    KeyCellReport,
    NotBinary,
    NotFeasible,
    NotTypeII,
    NotUniquelyCompletable,
    PuzzleClass,
    certify_uniqueness,
    classify,
    find_key_cells,
)

__all__ = [
    "AmbiguousCell",
    "CellRef",
    "CertificateResult",
    "ClassLabel",
    "ConstraintSystem",
    "ConstraintViolation",
    "CrossCheck",
    "FractionalReport",
    "IllegalCharacter",
    "IncompletePuzzle",
    "IndicatorVector",
    "InfeasiblePuzzle",
    "KeyCellEntry",
    "KeyCellReport",
    "NotBinary",
    "NotFeasible",
    "NotTypeII",
    "NotUniquelyCompletable",
    "P1Result",
    "Puzzle",
    "PuzzleClass",
    "PuzzleError",
    "RepairStage",
    "RepairTrace",
    "SolveOutcome",
    "SolveStatus",
    "SparseBinaryMatrix",
    "ValueHistogramEntry",
    "WrongLength",
    "build_system",
    "certify_uniqueness",
    "classify",
    "column_index",
    "decode_indicator",
    "dump_matrix",
    "encode_solution",
    "enumerate_completions",
    "find_key_cells",
    "format_puzzle",
    "is_uniquely_completable",
    "parse_puzzle",
    "residual_inf_norm",
    "solve_exact",
    "solve_improved",
    "solve_p1",
    "validate",
    "value_histogram",
]

__version__ = "0.1.0"
