"""Linear-programming machinery.

Two solvers live here: a two-phase revised simplex for vertex problems
(delegated to a compiled kernel when available) and a damped-Newton
analytic-center solver for the interior point the relaxation pipeline
reports.  Also: maximal-support detection for the feasibility polytope and
a full-column-rank test, both building blocks of the uniqueness certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import config
from ._kernels import simplex
from .system import ConstraintSystem, IndicatorVector, SparseBinaryMatrix


class NumericalBreakdown(RuntimeError):
    """The solver could not continue within its numerical tolerances."""


class InfeasibleSystem(ValueError):
    """The constraint system admits no feasible point."""


class LpStatus(Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """min c·x  s.t.  A_eq·x = b_eq,  lower ≤ x ≤ upper (±inf allowed)."""

    c: np.ndarray
    A_eq: np.ndarray | SparseBinaryMatrix
    b_eq: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        A = self.A_eq
        n = A.n_cols if isinstance(A, SparseBinaryMatrix) else np.shape(A)[1]
        m = A.n_rows if isinstance(A, SparseBinaryMatrix) else np.shape(A)[0]
        for name in ("c", "b_eq", "lower", "upper"):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=np.float64)
            )
        if self.c.shape != (n,) or self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError("objective/bounds length must match column count")
        if self.b_eq.shape != (m,):
            raise ValueError("right-hand side length must match row count")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")


@dataclass(frozen=True)
class LpSolution:
    """Simplex output;``x`` is a vertex of the feasible region when Optimal."""

    status: LpStatus
    x: np.ndarray
    objective_value: float
    iterations: int
    duals: np.ndarray
    reduced_costs: np.ndarray


@dataclass(frozen=True)
class SupportSet:
    """Columns that are strictly positive somewhere in the polytope."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        object.__setattr__(self, "indices", idx)

    def __contains__(self, i: int) -> bool:
        return i in set(self.indices)

    def __len__(self) -> int:
        return len(self.indices)


def _dense_t(A: np.ndarray | SparseBinaryMatrix) -> np.ndarray:
    dense = A.to_dense() if isinstance(A, SparseBinaryMatrix) else np.asarray(A, float)
    return np.ascontiguousarray(dense.T)


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Two-phase revised simplex; deterministic for fixed input."""
    out = simplex.solve(
        _dense_t(lp.A_eq),
        lp.b_eq,
        lp.c,
        lp.lower,
        lp.upper,
        tol_opt=config.LP_OPT_TOL,
        tol_feas=config.LP_FEAS_TOL,
        pivot_tol=config.LP_PIVOT_TOL,
        degen_step=config.LP_DEGENERATE_STEP,
        refactor_every=config.LP_REFACTOR_EVERY,
        bland_after=config.LP_BLAND_AFTER,
    )
    code = out["status"]
    if code == simplex.BREAKDOWN:
        raise NumericalBreakdown(
            f"simplex stalled after {out['iterations']} iterations"
        )
    status = {
        simplex.OPTIMAL: LpStatus.OPTIMAL,
        simplex.INFEASIBLE: LpStatus.INFEASIBLE,
        simplex.UNBOUNDED: LpStatus.UNBOUNDED,
    }[code]
    return LpSolution(
        status=status,
        x=out["x"],
        objective_value=out["objective"],
        iterations=out["iterations"],
        duals=out["y"],
        reduced_costs=out["d"],
    )


def maximal_support(
    sys: ConstraintSystem,
    delta: float = config.SUPPORT_DELTA,
    exhaustive: bool = False,
) -> tuple[SupportSet, np.ndarray]:
    """Indices that can be positive somewhere in {A·x = b, x ≥ 0}, plus a witness.

    One LP finds them all: maximize Σ_i s_i with 0 ≤ s_i ≤ delta, s_i ≤ x_i.
    Writing x = s + w (w ≥ 0) keeps the constraint count at n_rows.  At the
    optimum s_i = delta exactly for every index of the maximal support, since
    a convex combination of witnesses realizes all of them at once.  With
    ``exhaustive`` set, runs the n-LP per-variable maximization instead
    (slow; used to validate the single-LP trick).
    """
    A = sys.A
    n = A.n_cols
    if exhaustive:
        return _maximal_support_exhaustive(sys)
    dense = A.to_dense()
    AT2 = np.ascontiguousarray(np.hstack([dense, dense]).T)
    c = np.concatenate([-np.ones(n), np.zeros(n)])
    lo = np.zeros(2 * n)
    hi = np.concatenate([np.full(n, delta), np.full(n, np.inf)])
    twin = np.concatenate([np.arange(n, 2 * n), np.arange(n)])
    out = simplex.solve(
        AT2, sys.b, c, lo, hi,
        twin=twin,
        tol_opt=config.LP_OPT_TOL,
        tol_feas=config.LP_FEAS_TOL,
        pivot_tol=config.LP_PIVOT_TOL,
        degen_step=config.LP_DEGENERATE_STEP,
        refactor_every=config.LP_REFACTOR_EVERY,
        bland_after=config.LP_BLAND_AFTER,
    )
    if out["status"] == simplex.INFEASIBLE:
        raise InfeasibleSystem("the puzzle's constraint system is infeasible")
    if out["status"] != simplex.OPTIMAL:
        raise NumericalBreakdown("support LP did not reach optimality")
    s = out["x"][:n]
    w = out["x"][n:]
    support = SupportSet(tuple(np.flatnonzero(s > delta / 2)))
    witness = s + w
    return support, witness


def _maximal_support_exhaustive(sys: ConstraintSystem) -> tuple[SupportSet, np.ndarray]:
    A = sys.A
    n = A.n_cols
    AT = _dense_t(A)
    kw = dict(
        tol_opt=config.LP_OPT_TOL,
        tol_feas=config.LP_FEAS_TOL,
        pivot_tol=config.LP_PIVOT_TOL,
        degen_step=config.LP_DEGENERATE_STEP,
        refactor_every=config.LP_REFACTOR_EVERY,
        bland_after=config.LP_BLAND_AFTER,
    )
    lo = np.zeros(n)
    hi = np.full(n, np.inf)
    indices = []
    witness = np.zeros(n)
    count = 0
    for i in range(n):
        c = np.zeros(n)
        c[i] = -1.0  # maximize x_i
        out = simplex.solve(AT, sys.b, c, lo, hi, **kw)
        if out["status"] == simplex.INFEASIBLE:
            raise InfeasibleSystem("the puzzle's constraint system is infeasible")
        if out["status"] != simplex.OPTIMAL:
            raise NumericalBreakdown(f"per-variable support LP {i} failed")
        if -out["objective"] > config.SUPPORT_DELTA / 2:
            indices.append(i)
            witness += out["x"]
            count += 1
    if count:
        witness /= count
    return SupportSet(tuple(indices)), witness


def interior_point(
    sys: ConstraintSystem, support: SupportSet
) -> np.ndarray:
    """A feasible x with x_i bounded away from 0 on the support.

    Maximizes the uniform margin: max λ s.t. A(λ·1_S + v) = b, v ≥ 0 on S,
    λ ∈ [0, 1].  The returned x = λ*·1_S + v* keeps every support coordinate
    ≥ λ* > 0, which is what Newton needs to start.
    """
    A = sys.A
    n = A.n_cols
    idx = list(support.indices)
    k = len(idx)
    dense = A.to_dense()[:, idx]
    ones_col = dense.sum(axis=1, keepdims=True)
    AT2 = np.ascontiguousarray(np.hstack([ones_col, dense]).T)
    c = np.zeros(1 + k)
    c[0] = -1.0  # maximize λ
    lo = np.zeros(1 + k)
    hi = np.concatenate([[1.0], np.full(k, np.inf)])
    out = simplex.solve(
        AT2, sys.b, c, lo, hi,
        tol_opt=config.LP_OPT_TOL,
        tol_feas=config.LP_FEAS_TOL,
        pivot_tol=config.LP_PIVOT_TOL,
        degen_step=config.LP_DEGENERATE_STEP,
        refactor_every=config.LP_REFACTOR_EVERY,
        bland_after=config.LP_BLAND_AFTER,
    )
    if out["status"] != simplex.OPTIMAL:
        raise NumericalBreakdown("interior-point seed LP failed")
    lam = out["x"][0]
    if lam <= 0:
        raise NumericalBreakdown("no strictly interior point on the support")
    x = np.zeros(n)
    x[idx] = lam + out["x"][1:]
    return x


def analytic_center(
    sys: ConstraintSystem, support: SupportSet, x0: np.ndarray
) -> IndicatorVector:
    """Maximize Σ_{i∈support} log x_i over A·x = b (damped Newton).

    Variables outside the support stay fixed at 0; rows they satisfied stay
    in the system.  The objective is strictly concave on the relative
    interior, so the maximizer — the analytic center — is unique.
    """
    A = sys.A
    idx = np.array(support.indices, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("empty support")
    x0 = np.asarray(x0, dtype=np.float64)
    if np.any(x0[idx] <= 0):
        raise ValueError("starting point must be positive on the support")
    off = np.setdiff1d(np.arange(A.n_cols), idx)
    if np.any(np.abs(x0[off]) > 1e-12):
        raise ValueError("starting point must vanish off the support")

    As_all = A.to_dense()[:, idx]
    # drop linearly dependent rows once; the feasible set is unchanged and
    # the KKT solves below see a clean full-row-rank system
    keep = _independent_rows(As_all)
    As = As_all[keep]
    b = sys.b[keep]
    x = x0[idx].copy()
    prev_dec = np.inf
    for _ in range(config.NEWTON_MAX_ITER):
        # Newton step for max Σ log x_i s.t. As·x = b.  With G = As·diag(x),
        # the step in scaled coordinates u = dx/x is
        #   u = (1 − Gᵀh) − z,   Gᵀh ≈ least-squares fit of the ones vector,
        # where z restores feasibility (G·z = As·x − b).  Solving by
        # least squares instead of the squared normal equations keeps the
        # attainable decrement near machine precision.
        G = As * x[None, :]
        r = As @ x - b
        u_c = _lstsq_residual(G.T, np.ones(len(x)))
        z = _min_norm_solution(G, r)
        if not (np.all(np.isfinite(u_c)) and np.all(np.isfinite(z))):
            raise NumericalBreakdown("center KKT system is singular")
        u = u_c - z
        dx = x * u
        decrement = float(np.linalg.norm(u))
        if decrement <= config.NEWTON_DECREMENT_TOL:
            break
        if decrement <= 1e-8 and decrement >= 0.25 * prev_dec:
            break  # solver accuracy floor: stationary to working precision
        prev_dec = decrement
        step = 1.0
        neg = dx < 0
        if np.any(neg):
            step = min(1.0, 0.99 * float(np.min(-x[neg] / dx[neg])))
        if decrement > 1e-4:
            # damped phase: backtrack on the true objective.  (Inside the
            # quadratic regime the objective changes by ~decrement², beneath
            # float resolution, so the full step is taken unconditionally.)
            grad_dot = float(np.sum(u))  # ∇f·dx
            if grad_dot <= 0.0:
                raise NumericalBreakdown("center Newton lost ascent direction")
            f0 = float(np.sum(np.log(x)))
            while step > 1e-16:
                trial = x + step * dx
                if np.all(trial > 0):
                    f1 = float(np.sum(np.log(trial)))
                    if f1 >= f0 + 0.25 * step * grad_dot:
                        break
                step *= 0.5
            else:
                raise NumericalBreakdown("center line search failed")
        x = x + step * dx
    else:
        raise NumericalBreakdown("center Newton did not converge")

    full = np.zeros(A.n_cols)
    full[idx] = x
    resid = np.max(np.abs(As @ x - b))
    if resid > config.NEWTON_RESIDUAL_TOL:
        # one exact feasibility restoration: project onto A_S x = b
        corr, *_ = np.linalg.lstsq(As, As @ x - b, rcond=None)
        x = x - corr
        full[idx] = x
        resid = np.max(np.abs(As @ x - b))
        if resid > config.NEWTON_RESIDUAL_TOL or np.any(x <= 0):
            raise NumericalBreakdown(f"center residual {resid:.3e} too large")
    return IndicatorVector(np.clip(full, 0.0, 1.0))


def _lstsq_residual(A: np.ndarray, rhs: np.ndarray, rounds: int = 2) -> np.ndarray:
    """rhs − A·h for the least-squares fit h, with iterative refinement.

    Refinement keeps the residual meaningful well below the naive
    cancellation floor, which the analytic-center decrement test needs.
    """
    h, *_ = np.linalg.lstsq(A, rhs, rcond=config.NEWTON_RIDGE)
    res = rhs - A @ h
    for _ in range(rounds):
        dh, *_ = np.linalg.lstsq(A, res, rcond=config.NEWTON_RIDGE)
        h = h + dh
        res = res - A @ dh
    return res


def _min_norm_solution(A: np.ndarray, rhs: np.ndarray, rounds: int = 1) -> np.ndarray:
    """Minimum-norm solution of the (consistent) system A·z = rhs, refined."""
    z, *_ = np.linalg.lstsq(A, rhs, rcond=config.NEWTON_RIDGE)
    for _ in range(rounds):
        dz, *_ = np.linalg.lstsq(A, rhs - A @ z, rcond=config.NEWTON_RIDGE)
        z = z + dz
    return z


def _independent_rows(W: np.ndarray) -> list[int]:
    """Indices of a maximal linearly independent row subset of ``W``."""
    U = np.array(W, dtype=np.float64, copy=True)
    m, n = U.shape
    perm = list(range(m))
    rank = 0
    for j in range(n):
        if rank == m:
            break
        p = int(np.argmax(np.abs(U[rank:, j]))) + rank
        if abs(U[p, j]) <= config.RANK_PIVOT_TOL:
            continue
        if p != rank:
            U[[rank, p]] = U[[p, rank]]
            perm[rank], perm[p] = perm[p], perm[rank]
        U[rank + 1 :, j:] -= np.outer(U[rank + 1 :, j] / U[rank, j], U[rank, j:])
        rank += 1
    return sorted(perm[:rank])


def rank_full_column(M: np.ndarray) -> bool:
    """True iff M has full column rank (elimination with partial pivoting)."""
    W = np.array(M, dtype=np.float64, copy=True)
    if W.ndim != 2:
        raise ValueError("need a 2-D matrix")
    m, n = W.shape
    if m < n:
        return False
    rank = 0
    for j in range(n):
        col = np.abs(W[rank:, j])
        p = int(np.argmax(col)) + rank
        if np.abs(W[p, j]) <= config.RANK_PIVOT_TOL:
            return False  # no usable pivot in this column
        if p != rank:
            W[[rank, p]] = W[[p, rank]]
        W[rank + 1 :, j:] -= np.outer(
            W[rank + 1 :, j] / W[rank, j], W[rank, j:]
        )
        rank += 1
    return True
