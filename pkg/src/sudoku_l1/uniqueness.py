"""Uniqueness certificates for binary solutions of the relaxation.

A binary feasible x* with support I is the *unique* L1 minimiser iff the
columns A_I are linearly independent and there is a multiplier vector w with

    (A^T w)_k = 1            for k in I,
    |(A^T w)_j| <= 1 - eps   for j outside I.

We measure how close we can get to such a w by the min-max program

    minimise u  s.t.  |(A_I^T w)_k - 1| <= u,  |(A_Ic^T w)_j| <= 1 - eps,

whose optimal value is zero exactly when the certificate exists.  Puzzles
where it exists are *type I* (the relaxation recovers the grid directly);
uniquely-completable puzzles where it does not are *type II*.

The program is solved through its LP dual, which has only n_rows + 1
equality constraints instead of 2 * n_cols inequality rows:

    minimise  1'p - 1'q + (1-eps) 1'(r+s)
    s.t.      A_I (p - q) + A_Ic (r - s) = 0,
              1'(p + q) = 1,     p, q, r, s >= 0.

Its optimal value is -u*, and the equality-row duals are (w*, -u*), so one
solve yields the residual and the multiplier, with the bound
|A_Ic^T w| <= 1 - eps enforced by dual feasibility rather than aspiration.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import config
from .lp import LinearProgram, LpStatus, rank_full_column, solve_lp
from .puzzle import CellRef, Puzzle, SolveStatus, solve_exact
from .solvers import P1Result, solve_p1
from .system import ConstraintSystem, IndicatorVector, build_system, column_index, encode_solution


class NotBinary(ValueError):
    """The candidate vector is not a 0/1 indicator."""


class NotFeasible(ValueError):
    """The candidate vector does not satisfy A x = b."""


class NotUniquelyCompletable(ValueError):
    """The puzzle has zero or several completions, so classification is moot."""


class NotTypeII(ValueError):
    """The operation only makes sense on a type-II puzzle."""


@dataclass(frozen=True)
class CertificateResult:
    rank_ok: bool
    omega: np.ndarray  # multiplier vector, one entry per constraint row
    residual: float  # optimal u; zero (to tolerance) iff certificate exists
    epsilon: float
    unique: bool


class ClassLabel(Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"


@dataclass(frozen=True)
class CrossCheck:
    draws: int
    alternative_found: bool
    max_deviation: float  # largest ||x_lp - x*||_inf over the draws


@dataclass(frozen=True)
class PuzzleClass:
    label: ClassLabel
    certificate: CertificateResult
    cross_check: CrossCheck | None = None


def _support_of_binary(sys: ConstraintSystem, x_star: IndicatorVector) -> np.ndarray:
    v = x_star.values
    if not x_star.binary:
        raise NotBinary("certificate requires an exactly binary vector")
    resid = float(np.max(np.abs(sys.A.matvec(v) - sys.b)))
    if resid > 1e-9:
        raise NotFeasible(f"candidate violates the system by {resid:.3e}")
    return np.flatnonzero(v > 0.5)


def certify_uniqueness(
    sys: ConstraintSystem,
    x_star: IndicatorVector,
    epsilon: float = config.CERT_EPSILON,
) -> CertificateResult:
    """Decide whether x_star is the unique L1 minimiser of its system."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    support = _support_of_binary(sys, x_star)
    dense = sys.A.to_dense()
    a_supp = dense[:, support]
    rank_ok = rank_full_column(a_supp)

    comp = np.setdiff1d(np.arange(sys.A.n_cols), support)
    a_comp = dense[:, comp]
    m, k, j = sys.A.n_rows, support.size, comp.size

    # dual of the min-max certificate program; see module docstring
    a_dual = np.zeros((m + 1, 2 * k + 2 * j))
    a_dual[:m, :k] = a_supp
    a_dual[:m, k : 2 * k] = -a_supp
    a_dual[:m, 2 * k : 2 * k + j] = a_comp
    a_dual[:m, 2 * k + j :] = -a_comp
    a_dual[m, :k] = 1.0
    a_dual[m, k : 2 * k] = 1.0
    b_dual = np.zeros(m + 1)
    b_dual[m] = 1.0
    cost = np.concatenate(
        [
            np.ones(k),
            -np.ones(k),
            (1.0 - epsilon) * np.ones(j),
            (1.0 - epsilon) * np.ones(j),
        ]
    )
    upper = np.full(2 * k + 2 * j, np.inf)
    prog = LinearProgram(
        c=cost,
        A_eq=a_dual,
        b_eq=b_dual,
        lower=np.zeros(2 * k + 2 * j),
        upper=upper,
    )
    sol = solve_lp(prog)
    if sol.status is not LpStatus.OPTIMAL:  # pragma: no cover - always feasible/bounded
        raise RuntimeError(f"certificate program ended {sol.status.name}")
    residual = max(0.0, -sol.objective_value)
    omega = np.array(sol.duals[:m])
    unique = bool(rank_ok and residual < config.CERT_RESIDUAL_TOL)
    return CertificateResult(
        rank_ok=rank_ok,
        omega=omega,
        residual=residual,
        epsilon=epsilon,
        unique=unique,
    )


def classify(
    p: Puzzle,
    epsilon: float = config.CERT_EPSILON,
    cross_check: bool = False,
    draws: int = config.CROSS_CHECK_DRAWS,
    seed: int = 0,
) -> PuzzleClass:
    """Label a uniquely-completable puzzle TypeI or TypeII.

    The label comes from the certificate alone; with ``cross_check=True`` a
    randomised search for alternative optima is run alongside and recorded
    (it samples vertices of the feasible polytope with random objectives, so
    finding an alternative refutes uniqueness empirically).
    """
    out = solve_exact(p, count_cap=2)
    if out.status is not SolveStatus.SOLVED:
        raise NotUniquelyCompletable(f"exact solver reports {out.status.value}")
    sys = build_system(p)
    x_star = encode_solution(out.completion)
    cert = certify_uniqueness(sys, x_star, epsilon)
    label = ClassLabel.TYPE_I if cert.unique else ClassLabel.TYPE_II

    check = None
    if cross_check:
        rng = np.random.default_rng(seed)
        worst = 0.0
        found = False
        used = 0
        n = sys.A.n_cols
        for _ in range(draws):
            prog = LinearProgram(
                c=rng.uniform(-1.0, 1.0, size=n),
                A_eq=sys.A,
                b_eq=sys.b,
                lower=np.zeros(n),
                upper=np.ones(n),
            )
            sol = solve_lp(prog)
            used += 1
            if sol.status is not LpStatus.OPTIMAL:
                raise RuntimeError(f"cross-check program ended {sol.status.name}")
            dev = float(np.max(np.abs(np.array(sol.x) - x_star.values)))
            worst = max(worst, dev)
            if dev > config.ALT_SOLUTION_TOL:
                # one alternative point settles the question; skip the rest
                found = True
                break
        check = CrossCheck(draws=used, alternative_found=found, max_deviation=worst)
    return PuzzleClass(label=label, certificate=cert, cross_check=check)


@dataclass(frozen=True)
class KeyCellEntry:
    cell: CellRef
    augmented_label: ClassLabel
    augmented_residual: float
    p1_value: float  # relaxation value at the cell's true digit


@dataclass(frozen=True)
class KeyCellReport:
    puzzle: Puzzle
    key_cells: tuple[CellRef, ...]
    per_cell: tuple[KeyCellEntry, ...]


def find_key_cells(
    p: Puzzle,
    epsilon: float = config.CERT_EPSILON,
    workers: int = 1,
    p1: P1Result | None = None,
) -> KeyCellReport:
    """Find the empty cells whose true digit, added as a clue, turns a
    type-II puzzle into type I.

    Adding a clue from the completion never changes the completion, so each
    augmented puzzle is certified against the same binary solution.  Cells
    are scanned in row-major order; ``workers`` > 1 fans the certificates
    out over a thread pool (results keep row-major order either way).
    """
    out = solve_exact(p, count_cap=2)
    if out.status is not SolveStatus.SOLVED:
        raise NotUniquelyCompletable(f"exact solver reports {out.status.value}")
    completion = out.completion
    x_star = encode_solution(completion)
    base = certify_uniqueness(build_system(p), x_star, epsilon)
    if base.unique:
        raise NotTypeII("puzzle is type I; every augmentation is too")

    if p1 is None:
        p1 = solve_p1(p)
    xv = p1.x.values
    side = p.side
    cells = p.empty_cells()

    def entry(cell: CellRef) -> KeyCellEntry:
        digit = completion.value(cell)
        aug = p.with_value(cell, digit)
        cert = certify_uniqueness(build_system(aug), x_star, epsilon)
        label = ClassLabel.TYPE_I if cert.unique else ClassLabel.TYPE_II
        return KeyCellEntry(
            cell=cell,
            augmented_label=label,
            augmented_residual=cert.residual,
            p1_value=float(xv[column_index(side, cell.row, cell.col, digit)]),
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(entry, cells))
    else:
        entries = [entry(c) for c in cells]

    key = tuple(e.cell for e in entries if e.augmented_label is ClassLabel.TYPE_I)
    return KeyCellReport(puzzle=p, key_cells=key, per_cell=tuple(entries))
