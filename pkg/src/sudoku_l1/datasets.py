"""Bundled puzzle fixtures with pre-verified classifications.

The public collection of all known 17-clue puzzles is an external download
whose URL is no longer reliable, so the package ships its own fixture
bundles instead: seeded random reduced puzzles (22-28 clues) classified
with the dual certificate and cross-checked with a randomized
alternative-point oracle, plus a small set of genuine 17-clue puzzles
(one published example and symmetry images of it) for structural tests.

Bundle files live under ``sudoku_l1/data`` with one fixture per line:

    <grid> <TypeI|TypeII> <certificate residual>

Lines starting with '#' are comments.  The grid alone is the puzzle-line
format accepted everywhere else; the extra fields record the verified
classification so tests and benchmarks can sample by class without
re-deriving labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .puzzle import Puzzle, parse_puzzle
from .uniqueness import ClassLabel


@dataclass(frozen=True)
class FixtureRecord:
    """One bundled puzzle with its pre-verified classification."""

    puzzle: Puzzle
    label: ClassLabel
    residual: float
    text: str


def _data_root():
    return resources.files("sudoku_l1") / "data"


def bundle_names() -> list[str]:
    """Names of the available fixture bundles, sorted."""
    root = _data_root()
    return sorted(
        entry.name[: -len(".txt")]
        for entry in root.iterdir()
        if entry.name.endswith(".txt")
    )


def load_bundle(name: str) -> list[FixtureRecord]:
    """All fixtures of one bundle, in file order.

    ``name`` is the bundle's base name, e.g. ``"mixed_1000"``.  Raises
    FileNotFoundError for unknown bundles and ValueError for a line that
    does not parse as ``grid label residual``.
    """
    path = _data_root() / f"{name}.txt"
    if not path.is_file():
        known = ", ".join(bundle_names())
        raise FileNotFoundError(f"no bundle named {name!r} (have: {known})")
    records = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"{name}.txt line {lineno}: expected 'grid label residual'")
        grid, label_text, residual_text = parts
        try:
            label = ClassLabel(label_text)
        except ValueError as exc:
            raise ValueError(f"{name}.txt line {lineno}: unknown label {label_text!r}") from exc
        records.append(
            FixtureRecord(
                puzzle=parse_puzzle(grid),
                label=label,
                residual=float(residual_text),
                text=grid,
            )
        )
    return records


def fixtures_by_label(name: str, label: ClassLabel) -> list[FixtureRecord]:
    """The subset of a bundle carrying the given class label."""
    return [rec for rec in load_bundle(name) if rec.label is label]
