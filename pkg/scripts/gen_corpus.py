#!/usr/bin/env python3
"""Generate a seeded corpus of uniquely completable puzzles with classifications.

Each puzzle starts from a random complete grid (backtracking fill with a
seeded shuffle of candidate digits) and is then reduced: clues are removed
in a seeded random order, keeping each removal only if the puzzle still has
exactly one completion.  One reduction pass lands at 22-28 clues.  Every
puzzle is classified with the dual certificate; for the non-unique (TypeII)
ones the relaxation's fractional profile and the threshold-repair outcome
are recorded too, so the corpus doubles as a survey of repair behavior.

Output lines (append-only; the generator resumes by replaying the seeded
stream past the lines already present):

    <81 chars> <TypeI|TypeII> <residual> [nnz=<n> half=<h> stage=<s> t=<t>]

Grids are deduplicated up to digit relabelling before classification.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from sudoku_l1.puzzle import parse_puzzle, solve_exact, SolveStatus
from sudoku_l1.solvers import solve_improved, solve_p1
from sudoku_l1.uniqueness import ClassLabel, classify


def random_grid(rng: random.Random) -> str:
    """A uniformly scrambled complete grid via seeded backtracking fill."""
    grid = [0] * 81

    def admissible(i: int, d: int) -> bool:
        r, c = divmod(i, 9)
        br, bc = 3 * (r // 3), 3 * (c // 3)
        for j in range(81):
            if grid[j] != d:
                continue
            rj, cj = divmod(j, 9)
            if rj == r or cj == c or (3 * (rj // 3) == br and 3 * (cj // 3) == bc):
                return False
        return True

    def fill(i: int) -> bool:
        if i == 81:
            return True
        digits = list(range(1, 10))
        rng.shuffle(digits)
        for d in digits:
            if admissible(i, d):
                grid[i] = d
                if fill(i + 1):
                    return True
                grid[i] = 0
        return False

    fill(0)
    return "".join(map(str, grid))


def reduce_grid(grid: str, rng: random.Random) -> str:
    """Remove clues in seeded order while the completion stays unique."""
    order = list(range(81))
    rng.shuffle(order)
    g = list(grid)
    for i in order:
        kept = g[i]
        g[i] = "0"
        out = solve_exact(parse_puzzle("".join(g)), count_cap=2)
        if out.status is not SolveStatus.SOLVED:
            g[i] = kept
    return "".join(g)


def canonical(grid: str) -> str:
    names: dict[str, str] = {}
    out = []
    for ch in grid:
        if ch == "0":
            out.append("0")
            continue
        if ch not in names:
            names[ch] = str(len(names) + 1)
        out.append(names[ch])
    return "".join(out)


def classify_line(grid: str) -> str:
    verdict = classify(parse_puzzle(grid))
    residual = verdict.certificate.residual
    if verdict.label is ClassLabel.TYPE_I:
        return f"{grid} {verdict.label.value} {residual:.6e}"
    p1 = solve_p1(parse_puzzle(grid))
    trace = solve_improved(parse_puzzle(grid))
    t = "none" if trace.threshold is None else f"{trace.threshold:.4f}"
    return (
        f"{grid} {verdict.label.value} {residual:.6e} "
        f"nnz={p1.nonzero_count} half={p1.half_count} "
        f"stage={trace.stage.value} t={t}"
    )


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("corpus_raw.txt"))
    ap.add_argument("--seed", type=int, default=20260818)
    ap.add_argument("--need-typei", type=int, default=900)
    ap.add_argument("--need-typeii", type=int, default=400)
    args = ap.parse_args()

    done_lines = []
    if args.out.exists():
        done_lines = [
            ln.strip() for ln in args.out.read_text().splitlines()
            if ln.strip() and not ln.startswith("#")
        ]
    n_typei = sum(1 for ln in done_lines if ln.split()[1] == "TypeI")
    n_typeii = len(done_lines) - n_typei
    n_half = n_repaired = 0
    for ln in done_lines:
        parts = ln.split()
        if parts[1] != "TypeII":
            continue
        fields = dict(f.split("=", 1) for f in parts[3:] if "=" in f)
        if int(fields.get("half", "0")) > 0:
            n_half += 1
        if fields.get("stage") == "SolvedAfterRepair":
            n_repaired += 1

    rng = random.Random(args.seed)
    seen: set[str] = set()
    log = args.out.open("a")
    if not done_lines:
        log.write(f"# generated corpus, seed={args.seed}\n")

    produced = 0
    t0 = time.time()
    while n_typei < args.need_typei or n_typeii < args.need_typeii:
        g = reduce_grid(random_grid(rng), rng)
        c = canonical(g)
        if c in seen:
            continue
        seen.add(c)
        produced += 1
        if produced <= len(done_lines):
            continue  # replaying the stream behind an existing log
        line = classify_line(g)
        log.write(line + "\n")
        log.flush()
        parts = line.split()
        if parts[1] == ClassLabel.TYPE_I.value:
            n_typei += 1
        else:
            n_typeii += 1
            fields = dict(f.split("=", 1) for f in parts[3:] if "=" in f)
            if int(fields.get("half", "0")) > 0:
                n_half += 1
            if fields.get("stage") == "SolvedAfterRepair":
                n_repaired += 1
        if produced % 25 == 0:
            print(
                f"[corpus] n={produced} typei={n_typei} typeii={n_typeii} "
                f"half={n_half}/{n_typeii} repaired={n_repaired}/{n_typeii} "
                f"elapsed={time.time()-t0:.0f}s",
                file=sys.stderr,
            )
    log.close()
    print(
        f"[corpus] done: {n_typei} TypeI, {n_typeii} TypeII, "
        f"{n_half} with halves, {n_repaired} repaired",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
