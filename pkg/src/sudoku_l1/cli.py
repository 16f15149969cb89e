"""Batch command-line front end.

Four subcommands: ``solve`` completes puzzles (exact backtracking, plain
relaxation, or relaxation plus repair), ``classify`` labels puzzles in bulk
and writes report files, ``keycells`` sweeps the empty cells of one
non-unique puzzle, and ``matrix`` dumps a puzzle's constraint matrix.

``classify`` writes four files into ``--out-dir``: ``records.jsonl`` (one
JSON object per input line), ``summary.json`` (totals, rates, residual
histogram), ``residuals.csv`` (header ``residual``, one value per line),
and ``timings.jsonl`` (per-phase wall times).  The first three are
deterministic for fixed input, flags, and seed — at any worker count —
which is why the inherently run-dependent wall times live in their own
sidecar file.

Exit codes: 0 success; 1 at least one puzzle unsolved (``solve``); 2 input
or configuration error; 3 precondition violation; 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import config
from .lp import NumericalBreakdown
from .puzzle import (
    Puzzle,
    PuzzleError,
    format_puzzle,
    parse_puzzle,
    solve_exact,
    SolveStatus,
)
from .solvers import InfeasiblePuzzle, RepairStage, solve_improved, solve_p1
from .system import build_system, dump_matrix
from .uniqueness import (
    ClassLabel,
    NotTypeII,
    NotUniquelyCompletable,
    classify,
    find_key_cells,
)

EXIT_OK = 0
EXIT_UNSOLVED = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4

# fixed histogram edges for summary.json; the interesting structure is the
# gap between the integral population (residual ~0) and the rest at ~1e-4
RESIDUAL_BIN_EDGES = [0.0, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2, 1.0]


def read_puzzle_lines(source: str) -> list[tuple[int, str]]:
    """(line number, text) for every non-blank, non-comment line."""
    if source == "-":
        raw = sys.stdin.read()
    else:
        raw = Path(source).read_text()
    out = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        text = line.strip()
        if text and not text.startswith("#"):
            out.append((lineno, text))
    return out


def run_batch(
    tasks: Sequence,
    worker: Callable,
    worker_count: int,
) -> list:
    """Map ``worker`` over ``tasks``, preserving order.

    Workers must be pure per-task functions; with ``worker_count`` > 1 the
    tasks fan out over a process pool, and the order-preserving map keeps
    output independent of completion order.
    """
    if worker_count < 1:
        raise ValueError("worker count must be at least 1")
    if worker_count == 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * worker_count))
    with ProcessPoolExecutor(max_workers=worker_count) as pool:
        return list(pool.map(worker, tasks, chunksize=chunk))


# ---------------------------------------------------------------- classify


def _classify_worker(task: tuple[int, str, int, float]) -> dict:
    """Classify one puzzle and run the relaxation pipeline on it.

    Returns a plain dict: the deterministic record fields, plus a
    ``wall_times`` entry that the writer splits off into the sidecar.
    Failures come back as records with an ``error`` field; nothing raises.
    """
    puzzle_id, text, box_order, epsilon = task
    record: dict = {"puzzle_id": puzzle_id, "puzzle_text": text}
    times: dict[str, float] = {}
    try:
        p = parse_puzzle(text, box_order=box_order)
        t0 = time.perf_counter()
        verdict = classify(p, epsilon=epsilon)
        t1 = time.perf_counter()
        p1 = solve_p1(p)
        t2 = time.perf_counter()
        trace = solve_improved(p, first=p1)
        t3 = time.perf_counter()
        times = {
            "classify_ms": (t1 - t0) * 1e3,
            "p1_ms": (t2 - t1) * 1e3,
            "repair_ms": (t3 - t2) * 1e3,
        }
        record.update(
            label=verdict.label.value,
            residual=verdict.certificate.residual,
            p1_integral=p1.is_integral,
            p1_nonzero_count=p1.nonzero_count,
            improved_stage=trace.stage.value,
            promoted_cell_count=len(trace.promoted_cells),
        )
    except (PuzzleError, NotUniquelyCompletable, InfeasiblePuzzle) as exc:
        record["error"] = str(exc)
    except NumericalBreakdown as exc:
        record["error"] = f"numerical failure: {exc}"
    except Exception as exc:  # worker crashes stay isolated to their record
        record["error"] = f"{type(exc).__name__}: {exc}"
    record["wall_times"] = times
    return record


def _sample_lines(
    lines: list[tuple[int, str]], sample: int | None, seed: int
) -> list[tuple[int, str]]:
    """Seeded sample of the input lines, kept in input order."""
    if sample is None or sample >= len(lines):
        return lines
    rng = random.Random(seed)
    picked = sorted(rng.sample(range(len(lines)), sample))
    return [lines[i] for i in picked]


def _summarize(records: list[dict]) -> dict:
    classified = [r for r in records if "error" not in r]
    failures = len(records) - len(classified)
    typei = [r for r in classified if r["label"] == ClassLabel.TYPE_I.value]
    typeii = [r for r in classified if r["label"] == ClassLabel.TYPE_II.value]
    repaired = [
        r
        for r in typeii
        if r["improved_stage"] == RepairStage.SOLVED_AFTER_REPAIR.value
    ]
    residuals = [r["residual"] for r in classified]
    counts, _ = np.histogram(residuals, bins=RESIDUAL_BIN_EDGES)
    n = len(classified)
    return {
        "total": len(records),
        "failures": failures,
        "class_totals": {"TypeI": len(typei), "TypeII": len(typeii)},
        "direct_solve_rate": (
            sum(1 for r in classified if r["p1_integral"]) / n if n else 0.0
        ),
        "repair_success_rate": len(repaired) / len(typeii) if typeii else 0.0,
        "overall_accuracy": (len(typei) + len(repaired)) / n if n else 0.0,
        "residual_histogram": {
            "bin_edges": RESIDUAL_BIN_EDGES,
            "counts": [int(c) for c in counts],
        },
    }


def cmd_classify(args: argparse.Namespace) -> int:
    try:
        lines = read_puzzle_lines(args.input)
    except OSError as exc:
        print(f"cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    lines = _sample_lines(lines, args.sample, args.seed)
    tasks = [
        (lineno, text, args.box_order, args.epsilon) for lineno, text in lines
    ]
    results = run_batch(tasks, _classify_worker, args.workers)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / "records.jsonl").open("w") as rec_fh, (
        out_dir / "timings.jsonl"
    ).open("w") as tim_fh:
        for r in results:
            times = r.pop("wall_times")
            rec_fh.write(json.dumps(r, sort_keys=True) + "\n")
            tim_fh.write(
                json.dumps(
                    {"puzzle_id": r["puzzle_id"], "wall_times": times},
                    sort_keys=True,
                )
                + "\n"
            )
    with (out_dir / "residuals.csv").open("w") as fh:
        fh.write("residual\n")
        for r in results:
            if "error" not in r:
                fh.write(f"{r['residual']:.6e}\n")
    summary = _summarize(results)
    with (out_dir / "summary.json").open("w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")

    if any("numerical failure" in r.get("error", "") for r in results):
        return EXIT_NUMERICAL
    return EXIT_OK


# ------------------------------------------------------------------- solve


def _solve_worker(task: tuple[int, str, int, str]) -> dict:
    puzzle_id, text, box_order, mode = task
    out: dict = {"puzzle_id": puzzle_id, "solved": False}
    try:
        p = parse_puzzle(text, box_order=box_order)
        if mode == "exact":
            outcome = solve_exact(p, count_cap=2)
            if outcome.status is SolveStatus.INFEASIBLE:
                out["line"] = "infeasible"
            else:
                out["line"] = format_puzzle(outcome.completion)
                out["solved"] = True
        elif mode == "p1":
            res = solve_p1(p)
            if res.is_integral:
                out["line"] = format_puzzle(res.decoded)
                out["solved"] = True
            else:
                out["line"] = (
                    f"fractional nonzero={res.nonzero_count} half={res.half_count}"
                )
        else:
            trace = solve_improved(p)
            if trace.stage in (
                RepairStage.SOLVED_DIRECT,
                RepairStage.SOLVED_AFTER_REPAIR,
            ):
                out["line"] = format_puzzle(trace.final.decoded)
                out["solved"] = True
            else:
                out["line"] = f"failed stage={trace.stage.value}"
    except PuzzleError as exc:
        out["parse_error"] = str(exc)
    except InfeasiblePuzzle:
        out["line"] = "infeasible"
    except NumericalBreakdown as exc:
        out["numerical_error"] = str(exc)
    return out


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        lines = read_puzzle_lines(args.input)
    except OSError as exc:
        print(f"cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    mode = "exact"
    if args.p1:
        mode = "p1"
    elif args.improved:
        mode = "improved"
    tasks = [(lineno, text, args.box_order, mode) for lineno, text in lines]
    results = run_batch(tasks, _solve_worker, args.workers)

    had_parse = had_numerical = had_unsolved = False
    for r in results:
        if "parse_error" in r:
            had_parse = True
            print(f"line {r['puzzle_id']}: {r['parse_error']}", file=sys.stderr)
        elif "numerical_error" in r:
            had_numerical = True
            print(
                f"line {r['puzzle_id']}: numerical failure: {r['numerical_error']}",
                file=sys.stderr,
            )
        else:
            print(r["line"])
            had_unsolved = had_unsolved or not r["solved"]
    if had_parse:
        return EXIT_INPUT
    if had_numerical:
        return EXIT_NUMERICAL
    return EXIT_UNSOLVED if had_unsolved else EXIT_OK


# ---------------------------------------------------------------- keycells


def _render_key_cells(p: Puzzle, key_cells: Iterable) -> str:
    """ASCII grid: clues as digits, empty cells '.', key cells '*'."""
    marked = {(c.row, c.col) for c in key_cells}
    lines = []
    for r in range(1, p.side + 1):
        chars = []
        for c in range(1, p.side + 1):
            v = p.cells[r - 1][c - 1]
            if (r, c) in marked:
                chars.append("*")
            elif v == 0:
                chars.append(".")
            else:
                chars.append(str(v))
            if c % p.box_order == 0 and c != p.side:
                chars.append("|")
        lines.append(" ".join(chars))
        if r % p.box_order == 0 and r != p.side:
            lines.append("-" * len(lines[-1]))
    return "\n".join(lines)


def cmd_keycells(args: argparse.Namespace) -> int:
    try:
        lines = read_puzzle_lines(args.input)
    except OSError as exc:
        print(f"cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not lines:
        print("no puzzle in input", file=sys.stderr)
        return EXIT_INPUT
    lineno, text = lines[0]
    try:
        p = parse_puzzle(text, box_order=args.box_order)
    except PuzzleError as exc:
        print(f"line {lineno}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        report = find_key_cells(p, epsilon=args.epsilon, workers=args.workers)
    except (NotTypeII, NotUniquelyCompletable) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PRECONDITION
    except NumericalBreakdown as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    rendering = _render_key_cells(p, report.key_cells)
    doc = {
        "puzzle": format_puzzle(p),
        "key_cell_count": len(report.key_cells),
        "key_cells": [[c.row, c.col] for c in report.key_cells],
        "per_cell": [
            {
                "cell": [e.cell.row, e.cell.col],
                "augmented_label": e.augmented_label.value,
                "augmented_residual": e.augmented_residual,
                "p1_value": e.p1_value,
            }
            for e in report.per_cell
        ],
        "grid_rendering": rendering,
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    print(rendering, file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------------ matrix


def cmd_matrix(args: argparse.Namespace) -> int:
    text = args.puzzle
    side = args.box_order * args.box_order
    if len(text) != side * side or not all(ch in "0123456789." for ch in text):
        # not a literal grid: treat as a file holding one
        try:
            lines = read_puzzle_lines(text)
        except OSError as exc:
            print(f"cannot read {text}: {exc}", file=sys.stderr)
            return EXIT_INPUT
        if not lines:
            print("no puzzle in input", file=sys.stderr)
            return EXIT_INPUT
        text = lines[0][1]
    try:
        p = parse_puzzle(text, box_order=args.box_order)
    except PuzzleError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    dump_matrix(build_system(p).A, sys.stdout)
    return EXIT_OK


# ------------------------------------------------------------------- entry


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sudoku-l1",
        description="Sudoku as a sparse binary linear system: exact solving, "
        "linear relaxation, uniqueness certificates, and threshold repair.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--box-order", type=int, choices=(2, 3), default=3)
        sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("solve", help="complete puzzles from a file or '-'")
    sp.add_argument("input", help="puzzle file, one per line, or '-' for stdin")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="backtracking (default)")
    mode.add_argument("--p1", action="store_true", help="linear relaxation")
    mode.add_argument("--improved", action="store_true", help="relaxation + repair")
    common(sp)
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("classify", help="batch classification with reports")
    sp.add_argument("input", help="puzzle file, one per line, or '-' for stdin")
    sp.add_argument("--epsilon", type=float, default=config.CERT_EPSILON)
    sp.add_argument("--sample", type=int, default=None, metavar="N",
                    help="classify a seeded random sample of N lines")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out-dir", default=".")
    common(sp)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("keycells", help="key-cell sweep of one TypeII puzzle")
    sp.add_argument("input", help="file whose first puzzle line is swept")
    sp.add_argument("--epsilon", type=float, default=config.CERT_EPSILON)
    common(sp)
    sp.set_defaults(fn=cmd_keycells)

    sp = sub.add_parser("matrix", help="dump a puzzle's constraint matrix")
    sp.add_argument("puzzle", help="an 81-char grid (16 for --box-order 2) or a file")
    sp.add_argument("--box-order", type=int, choices=(2, 3), default=3)
    sp.set_defaults(fn=cmd_matrix)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        print("--workers must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "sample", None) is not None and args.sample < 1:
        print("--sample must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "epsilon", None) is not None and not 0.0 < args.epsilon < 1.0:
        print("--epsilon must lie strictly between 0 and 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.fn(args)
    except BrokenPipeError:
        # downstream consumer (head, etc.) closed the pipe; not our error
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
