#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallbacks.

Runs the same workloads twice — once with the compiled extensions (when
built) and once with ``SUDOKU_L1_PURE_PYTHON=1`` forcing the fallbacks —
and prints a side-by-side table.  Workloads cover both kernel families:

  exact      full enumeration of the 288 Shidoku grids, a 17-clue solve,
             and enumeration of a multi-completion remainder
  simplex    the support/interior-point/center pipeline and the
             uniqueness certificate on a 17-clue puzzle

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

FIG1 = "040600005000070100000000802000021000090000030000008000000400070105000000200000000"


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_workloads(repeat: int) -> dict[str, float]:
    from sudoku_l1._kernels import backend_names
    from sudoku_l1.puzzle import enumerate_completions, parse_puzzle, solve_exact
    from sudoku_l1.lp import analytic_center, interior_point, maximal_support
    from sudoku_l1.system import build_system, encode_solution
    from sudoku_l1.uniqueness import certify_uniqueness

    fig1 = parse_puzzle(FIG1)
    shidoku_empty = parse_puzzle("0" * 16, box_order=2)
    remainder = parse_puzzle(FIG1[:8] + "0" + FIG1[9:])
    sys_fig1 = build_system(fig1)

    results = {
        "backends": ", ".join(f"{k}={v}" for k, v in backend_names().items()),
        "shidoku_enumerate_288": _time(
            lambda: enumerate_completions(shidoku_empty, 300), repeat
        ),
        "seventeen_clue_solve": _time(
            lambda: solve_exact(fig1, count_cap=2), repeat
        ),
        "remainder_enumerate": _time(
            lambda: enumerate_completions(remainder, 4000), repeat
        ),
    }

    def support_pipeline():
        support, _ = maximal_support(sys_fig1)
        x0 = interior_point(sys_fig1, support)
        analytic_center(sys_fig1, support, x0)

    results["relaxation_pipeline"] = _time(support_pipeline, repeat)

    completion = solve_exact(fig1, count_cap=2).completion
    x_bin = encode_solution(completion)
    results["certificate_lp"] = _time(
        lambda: certify_uniqueness(sys_fig1, x_bin), repeat
    )
    return results


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--inner", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.inner:
        print(json.dumps(run_workloads(args.repeat)))
        return 0

    rows = {}
    for label, force_pure in (("compiled", False), ("pure python", True)):
        env = dict(os.environ)
        if force_pure:
            env["SUDOKU_L1_PURE_PYTHON"] = "1"
        else:
            env.pop("SUDOKU_L1_PURE_PYTHON", None)
        proc = subprocess.run(
            [sys.executable, __file__, "--inner", "--repeat", str(args.repeat)],
            capture_output=True,
            text=True,
            env=env,
        )
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            return 1
        rows[label] = json.loads(proc.stdout)

    workloads = [k for k in rows["compiled"] if k != "backends"]
    for label in rows:
        print(f"{label}: backends = {rows[label]['backends']}")
    print()
    width = max(len(w) for w in workloads)
    print(f"{'workload'.ljust(width)}  {'compiled':>12}  {'pure':>12}  {'speedup':>8}")
    for w in workloads:
        fast = rows["compiled"][w]
        slow = rows["pure python"][w]
        ratio = slow / fast if fast > 0 else float("inf")
        print(f"{w.ljust(width)}  {fast:>10.4f}s  {slow:>10.4f}s  {ratio:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
