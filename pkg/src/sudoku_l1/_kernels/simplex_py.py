"""Pure-Python (numpy) two-phase bounded-variable revised simplex kernel.

Equality constraints with per-variable bounds; dense explicit basis inverse
with product-form updates and periodic refactorization.  Pricing is Dantzig
(most violating reduced cost, ties to the smallest index) with Bland's rule
engaged after a run of degenerate pivots, so the method cannot cycle.

The compiled kernel implements the same algorithm; because the two backends
accumulate dot products in different orders, degenerate ties may resolve
differently between them.  Each backend is individually deterministic.
"""

from __future__ import annotations

import numpy as np

NB_LO, NB_UP, BASIC, NB_FREE, NB_FIXED = 0, 1, 2, 3, 4
OPTIMAL, INFEASIBLE, UNBOUNDED, BREAKDOWN = 0, 1, 2, 3

# Ratio-test hygiene.  Rows whose pivot-column entry is below RATIO_TOL in
# magnitude never block (their basic variable drifts by at most t * RATIO_TOL
# per step, absorbed at the next refactorization).  A blocking entry below
# PIVOT_ACCEPT is still too small to divide by safely — such pivots only
# arise at degenerate rows, so the entering column is set aside and another
# one tried; the bans are dropped after the next successful step.
RATIO_TOL = 1e-9
PIVOT_ACCEPT = 1e-7


def solve(
    AT,
    b,
    c,
    lo,
    up,
    tol_opt=1e-9,
    tol_feas=1e-8,
    pivot_tol=1e-11,
    degen_step=1e-12,
    refactor_every=500,
    bland_after=2,
    max_iters=0,
    twin=None,
):
    """Minimize c·x subject to AT.T @ x = b, lo ≤ x ≤ up.

    ``AT`` is the transposed constraint matrix (n_vars × n_rows, C order).
    Returns a dict with status, x, objective, iterations, duals y, reduced
    costs d, basis, and vstat.

    ``twin`` (optional, length n, -1 where absent) marks pairs of variables
    whose matrix columns are identical.  When one of a pair enters while the
    other is basic, the pivot column is exactly a unit vector, so the step
    reduces to moving value between the two; doing that algebraically keeps
    the basis inverse untouched instead of feeding it round-off.
    """
    AT = np.ascontiguousarray(AT, dtype=np.float64)
    n, m = AT.shape
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    lo = np.asarray(lo, dtype=np.float64)
    up = np.asarray(up, dtype=np.float64)
    if b.shape != (m,) or c.shape != (n,) or lo.shape != (n,) or up.shape != (n,):
        raise ValueError("inconsistent LP dimensions")
    if np.any(lo > up):
        raise ValueError("lower bound exceeds upper bound")
    if max_iters <= 0:
        max_iters = max(20_000, 50 * (n + m))

    # initial nonbasic placement of the structurals
    x = np.zeros(n + m)
    vstat = np.empty(n + m, dtype=np.int8)
    for j in range(n):
        if lo[j] == up[j]:
            vstat[j] = NB_FIXED
            x[j] = lo[j]
        elif np.isfinite(lo[j]):
            vstat[j] = NB_LO
            x[j] = lo[j]
        elif np.isfinite(up[j]):
            vstat[j] = NB_UP
            x[j] = up[j]
        else:
            vstat[j] = NB_FREE
            x[j] = 0.0

    r = b - AT.T @ x[:n]
    sgn = np.where(r >= 0, 1.0, -1.0)
    ATfull = np.vstack([AT, np.diag(sgn)])
    lo_full = np.concatenate([lo, np.zeros(m)])
    up_full = np.concatenate([up, np.full(m, np.inf)])
    x[n:] = np.abs(r)
    vstat[n:] = BASIC
    basis = np.arange(n, n + m, dtype=np.int64)
    Binv = np.diag(sgn)

    twin_full = np.full(n + m, -1, dtype=np.int64)
    if twin is not None:
        twin_arr = np.asarray(twin, dtype=np.int64)
        if twin_arr.shape != (n,):
            raise ValueError("twin must have one entry per variable")
        twin_full[:n] = twin_arr

    state = _State(
        ATfull, b, lo_full, up_full, x, vstat, basis, Binv, n, m,
        tol_opt, pivot_tol, degen_step, refactor_every, bland_after, max_iters,
        twin_full,
    )

    # phase 1: drive the artificial variables to zero
    cur_c = np.concatenate([np.zeros(n), np.ones(m)])
    status = _iterate(state, cur_c, phase1=True)
    if status == BREAKDOWN:
        return _result(state, c, BREAKDOWN)
    if status == UNBOUNDED:  # impossible for a cost bounded below; treat as failure
        return _result(state, c, BREAKDOWN)
    if float(x[n:].sum()) > tol_feas:
        return _result(state, c, INFEASIBLE)

    # phase 2: original objective; artificials pinned to zero
    up_full[n:] = 0.0
    lo_full[n:] = 0.0
    for j in range(n, n + m):
        if vstat[j] != BASIC:
            vstat[j] = NB_FIXED
            x[j] = 0.0
    cur_c = np.concatenate([c, np.zeros(m)])
    status = _iterate(state, cur_c, phase1=False)
    return _result(state, c, status)


class _State:
    """Mutable solver state shared by the two phases."""

    def __init__(
        self, ATfull, b, lo, up, x, vstat, basis, Binv, n, m,
        tol_opt, pivot_tol, degen_step, refactor_every, bland_after, max_iters,
        twin,
    ):
        self.ATfull, self.b = ATfull, b
        self.lo, self.up = lo, up
        self.x, self.vstat, self.basis, self.Binv = x, vstat, basis, Binv
        self.n, self.m = n, m
        self.twin = twin
        self.tol_opt, self.pivot_tol = tol_opt, pivot_tol
        self.degen_step = degen_step
        self.refactor_every, self.bland_after = refactor_every, bland_after
        self.max_iters = max_iters
        self.iterations = 0
        self.since_refactor = 0
        self.y = np.zeros(m)

    def refactor(self):
        B = self.ATfull[self.basis].T
        try:
            self.Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False
        if not np.all(np.isfinite(self.Binv)):
            return False
        x_nb = self.x.copy()
        x_nb[self.basis] = 0.0
        self.x[self.basis] = self.Binv @ (self.b - self.ATfull.T @ x_nb)
        self.since_refactor = 0
        return True


def _iterate(st, cur_c, phase1):
    n, m = st.n, st.m
    total = n + m
    bland = False
    degen_run = 0
    banned = np.zeros(total, dtype=bool)
    exhausted = False

    while True:
        if st.iterations >= st.max_iters:
            return BREAKDOWN
        if st.since_refactor >= st.refactor_every:
            if not st.refactor():
                return BREAKDOWN

        st.y = st.Binv.T @ cur_c[st.basis]
        d = cur_c - st.ATfull @ st.y

        viol = np.zeros(total)
        at_lo = st.vstat == NB_LO
        at_up = st.vstat == NB_UP
        free = st.vstat == NB_FREE
        viol[at_lo] = np.maximum(-d[at_lo], 0.0)
        viol[at_up] = np.maximum(d[at_up], 0.0)
        viol[free] = np.abs(d[free])
        viol[viol <= st.tol_opt] = 0.0
        if not np.any(viol > 0.0):
            if st.since_refactor == 0:
                return OPTIMAL
            # confirm on a fresh factorization before declaring optimality;
            # accumulated eta updates can misprice near the end
            if not st.refactor():
                return BREAKDOWN
            banned[:] = False
            continue
        if np.any(viol[~banned] > 0.0):
            viol = np.where(banned, 0.0, viol)
        elif not exhausted:
            banned[:] = False  # nothing left to try; revisit the set-asides
            exhausted = True
        if bland:
            j = int(np.flatnonzero(viol > 0.0)[0])
        else:
            j = int(np.argmax(viol))  # ties resolve to the smallest index

        sigma = 1.0
        if st.vstat[j] == NB_UP or (st.vstat[j] == NB_FREE and d[j] > 0):
            sigma = -1.0

        tw = st.twin[j]
        if tw >= 0 and st.vstat[tw] == BASIC:
            # identical columns: entering j just moves value off the basic
            # twin, one-for-one, with the basis inverse left alone
            if sigma > 0:
                room_j = st.up[j] - st.x[j]
                room_tw = st.x[tw] - st.lo[tw]
            else:
                room_j = st.x[j] - st.lo[j]
                room_tw = st.up[tw] - st.x[tw]
            t = min(room_j, room_tw)
            if not np.isfinite(t):
                return UNBOUNDED
            st.iterations += 1
            banned[:] = False
            exhausted = False
            if t <= st.degen_step:
                degen_run += 1
                if degen_run > st.bland_after * total:
                    bland = True
            else:
                degen_run = 0
                bland = False
            if room_j <= room_tw:
                # j crosses to its far bound; twin stays basic
                st.x[j] = st.up[j] if sigma > 0 else st.lo[j]
                st.x[tw] -= sigma * t
                st.vstat[j] = NB_UP if sigma > 0 else NB_LO
            else:
                # twin hits its bound and the labels swap in place
                row_tw = int(np.flatnonzero(st.basis == tw)[0])
                st.x[j] += sigma * t
                st.x[tw] = st.lo[tw] if sigma > 0 else st.up[tw]
                st.vstat[tw] = NB_LO if sigma > 0 else NB_UP
                if st.lo[tw] == st.up[tw]:
                    st.vstat[tw] = NB_FIXED
                st.basis[row_tw] = j
                st.vstat[j] = BASIC
            continue

        alpha = st.Binv @ st.ATfull[j]

        # ratio test: how far can x_j move before a basic variable (or x_j
        # itself) hits a bound
        xB = st.x[st.basis]
        loB, upB = st.lo[st.basis], st.up[st.basis]
        a = sigma * alpha
        caps = np.full(m, np.inf)
        dec = a > RATIO_TOL
        inc = a < -RATIO_TOL
        caps[dec] = (xB[dec] - loB[dec]) / a[dec]
        caps[inc] = (upB[inc] - xB[inc]) / (-a[inc])
        caps = np.maximum(caps, 0.0)
        t_own = st.up[j] - st.lo[j]  # bound-to-bound flip distance
        t_basic = float(caps.min()) if m else np.inf
        t = min(t_own, t_basic)
        if not np.isfinite(t):
            return UNBOUNDED

        leave = -1
        if t_basic <= t_own:
            near = np.flatnonzero(caps <= t + 1e-15)
            if bland:
                leave = int(near[np.argmin(st.basis[near])])
            else:
                leave = int(near[np.argmax(np.abs(alpha[near]))])

        st.iterations += 1
        if t <= st.degen_step:
            degen_run += 1
            if degen_run > st.bland_after * total:
                bland = True
        else:
            degen_run = 0
            bland = False

        if leave < 0:
            # bound flip: no basis change
            st.x[j] = st.up[j] if sigma > 0 else st.lo[j]
            st.x[st.basis] = xB - sigma * t * alpha
            st.vstat[j] = NB_UP if sigma > 0 else NB_LO
            banned[:] = False
            exhausted = False
            continue

        piv = alpha[leave]
        if abs(piv) < PIVOT_ACCEPT:
            st.iterations -= 1
            if st.since_refactor > 0:
                # the entry may just be stale; recompute and retry
                if not st.refactor():
                    return BREAKDOWN
                banned[:] = False
                exhausted = False
                continue
            if not exhausted:
                banned[j] = True
                continue
            if abs(piv) < st.pivot_tol:
                return BREAKDOWN
            st.iterations += 1  # no better pivot exists; take it reluctantly

        st.x[j] += sigma * t
        st.x[st.basis] = xB - sigma * t * alpha
        out = st.basis[leave]
        if st.lo[out] == st.up[out]:
            st.vstat[out] = NB_FIXED
            st.x[out] = st.lo[out]
        elif sigma * alpha[leave] > 0:
            st.vstat[out] = NB_LO
            st.x[out] = st.lo[out]
        else:
            st.vstat[out] = NB_UP
            st.x[out] = st.up[out]
        if phase1 and out >= n:
            # an artificial that leaves the basis never comes back
            st.vstat[out] = NB_FIXED
            st.lo[out] = st.up[out] = 0.0
            st.x[out] = 0.0
        st.basis[leave] = j
        st.vstat[j] = BASIC

        row = st.Binv[leave] / piv
        st.Binv -= np.outer(alpha, row)
        st.Binv[leave] = row
        st.since_refactor += 1
        banned[:] = False
        exhausted = False


def _result(st, c, status):
    n = st.n
    x = st.x[:n].copy()
    cur_c = np.concatenate([c, np.zeros(st.m)])
    y = st.Binv.T @ cur_c[st.basis]
    d = c - st.ATfull[:n] @ y
    return {
        "status": status,
        "x": x,
        "objective": float(c @ x),
        "iterations": st.iterations,
        "y": y,
        "d": d,
        "basis": st.basis.copy(),
        "vstat": st.vstat[:n].copy(),
    }
