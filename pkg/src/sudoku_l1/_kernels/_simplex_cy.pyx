# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Bounded-variable revised simplex, compiled twin of ``simplex_py``.

Same algorithm and pivot rules; the win is C loops plus sparse columns
(a few nonzeros each here), which turns pricing and the pivot-column
solve into O(nnz * m) work instead of dense O(m^2) numpy calls.
Floating-point summation order differs from the numpy code, so on heavily
degenerate problems the two backends may walk different (equally valid)
pivot paths; results agree in status, objective, and feasibility.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

NB_LO, NB_UP, BASIC, NB_FREE, NB_FIXED = 0, 1, 2, 3, 4
OPTIMAL, INFEASIBLE, UNBOUNDED, BREAKDOWN = 0, 1, 2, 3

cdef double RATIO_TOL = 1e-9
cdef double PIVOT_ACCEPT = 1e-7

cdef int C_NB_LO = 0, C_NB_UP = 1, C_BASIC = 2, C_NB_FREE = 3, C_NB_FIXED = 4
cdef int C_OPTIMAL = 0, C_INFEASIBLE = 1, C_UNBOUNDED = 2, C_BREAKDOWN = 3


cdef struct _Prob:
    int n
    int m
    int total
    double tol_opt
    double pivot_tol
    double degen_step
    int refactor_every
    int bland_after
    long long max_iters
    long long iterations
    int since_refactor
    # column-sparse matrix over all n+m variables
    long long *cptr
    long long *cidx
    double *cval
    double *b
    double *lo
    double *up
    double *x
    signed char *vstat
    long long *basis
    long long *where_basic  # var -> basis row, or -1
    double *Binv            # m*m, row-major
    long long *twin
    # scratch
    double *y
    double *d
    double *alpha
    double *caps


cdef void _compute_y(_Prob *p, double *cur_c) noexcept nogil:
    """y = Binv^T c_B, skipping zero basic costs."""
    cdef long long r, k
    cdef double cb
    for k in range(p.m):
        p.y[k] = 0.0
    for r in range(p.m):
        cb = cur_c[p.basis[r]]
        if cb != 0.0:
            for k in range(p.m):
                p.y[k] += cb * p.Binv[r * p.m + k]


cdef void _compute_d(_Prob *p, double *cur_c) noexcept nogil:
    """d = cur_c - A^T y via the sparse columns."""
    cdef long long j, q
    cdef double acc
    for j in range(p.total):
        acc = 0.0
        for q in range(p.cptr[j], p.cptr[j + 1]):
            acc += p.cval[q] * p.y[p.cidx[q]]
        p.d[j] = cur_c[j] - acc


cdef void _compute_alpha(_Prob *p, long long j) noexcept nogil:
    """alpha = Binv @ column_j via the column's nonzeros."""
    cdef long long q, k, r
    cdef double v
    for k in range(p.m):
        p.alpha[k] = 0.0
    for q in range(p.cptr[j], p.cptr[j + 1]):
        r = p.cidx[q]
        v = p.cval[q]
        for k in range(p.m):
            p.alpha[k] += v * p.Binv[k * p.m + r]


cdef int _refactor(_Prob *p, object np_Binv, object np_basis, object np_ATfull,
                   object np_x, object np_b):
    """Rebuild Binv with LAPACK and recompute the basic values."""
    B = np_ATfull[np_basis].T
    try:
        Binv_new = np.linalg.inv(B)
    except np.linalg.LinAlgError:
        return 0
    if not np.all(np.isfinite(Binv_new)):
        return 0
    np_Binv[:, :] = Binv_new
    x_nb = np_x.copy()
    x_nb[np_basis] = 0.0
    np_x[np_basis] = np_Binv @ (np_b - np_ATfull.T @ x_nb)
    p.since_refactor = 0
    return 1


def solve(
    AT,
    b,
    c,
    lo,
    up,
    double tol_opt=1e-9,
    double tol_feas=1e-8,
    double pivot_tol=1e-11,
    double degen_step=1e-12,
    int refactor_every=500,
    int bland_after=2,
    long long max_iters=0,
    twin=None,
):
    """Minimize c·x subject to AT.T @ x = b, lo ≤ x ≤ up.

    Same contract as the pure-Python kernel, including the optional
    ``twin`` marker for duplicate-column variable pairs.
    """
    AT = np.ascontiguousarray(AT, dtype=np.float64)
    cdef long long n = AT.shape[0]
    cdef long long m = AT.shape[1]
    b = np.asarray(b, dtype=np.float64)
    c_arr = np.asarray(c, dtype=np.float64)
    lo_in = np.asarray(lo, dtype=np.float64)
    up_in = np.asarray(up, dtype=np.float64)
    if b.shape != (m,) or c_arr.shape != (n,) or lo_in.shape != (n,) or up_in.shape != (n,):
        raise ValueError("inconsistent LP dimensions")
    if np.any(lo_in > up_in):
        raise ValueError("lower bound exceeds upper bound")
    if max_iters <= 0:
        max_iters = max(20_000, 50 * (n + m))

    cdef long long total = n + m

    x_np = np.zeros(total)
    vstat_np = np.empty(total, dtype=np.int8)
    finite_lo = np.isfinite(lo_in)
    finite_up = np.isfinite(up_in)
    for j in range(n):
        if lo_in[j] == up_in[j]:
            vstat_np[j] = NB_FIXED
            x_np[j] = lo_in[j]
        elif finite_lo[j]:
            vstat_np[j] = NB_LO
            x_np[j] = lo_in[j]
        elif finite_up[j]:
            vstat_np[j] = NB_UP
            x_np[j] = up_in[j]
        else:
            vstat_np[j] = NB_FREE
            x_np[j] = 0.0

    r_np = b - AT.T @ x_np[:n]
    sgn = np.where(r_np >= 0, 1.0, -1.0)
    ATfull_np = np.vstack([AT, np.diag(sgn)])
    lo_np = np.concatenate([lo_in, np.zeros(m)])
    up_np = np.concatenate([up_in, np.full(m, np.inf)])
    x_np[n:] = np.abs(r_np)
    vstat_np[n:] = BASIC
    basis_np = np.arange(n, total, dtype=np.int64)
    Binv_np = np.ascontiguousarray(np.diag(sgn))

    twin_np = np.full(total, -1, dtype=np.int64)
    if twin is not None:
        twin_arr = np.asarray(twin, dtype=np.int64)
        if twin_arr.shape != (n,):
            raise ValueError("twin must have one entry per variable")
        twin_np[:n] = twin_arr

    # column-sparse view of ATfull
    nz_per = (ATfull_np != 0.0).sum(axis=1)
    cptr_np = np.zeros(total + 1, dtype=np.int64)
    np.cumsum(nz_per, out=cptr_np[1:])
    cidx_np = np.empty(int(cptr_np[total]), dtype=np.int64)
    cval_np = np.empty(int(cptr_np[total]), dtype=np.float64)
    for j in range(total):
        nz = np.flatnonzero(ATfull_np[j])
        cidx_np[int(cptr_np[j]) : int(cptr_np[j + 1])] = nz
        cval_np[int(cptr_np[j]) : int(cptr_np[j + 1])] = ATfull_np[j, nz]

    where_np = np.full(total, -1, dtype=np.int64)
    where_np[basis_np] = np.arange(m, dtype=np.int64)

    y_np = np.zeros(m)
    d_np = np.zeros(total)
    alpha_np = np.zeros(m)
    caps_np = np.zeros(m)

    cdef cnp.ndarray[cnp.float64_t, ndim=1] x_v = x_np
    cdef cnp.ndarray[cnp.int8_t, ndim=1] vstat_v = vstat_np
    cdef cnp.ndarray[cnp.int64_t, ndim=1] basis_v = basis_np
    cdef cnp.ndarray[cnp.int64_t, ndim=1] where_v = where_np
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Binv_v = Binv_np
    cdef cnp.ndarray[cnp.int64_t, ndim=1] twin_v = twin_np
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cptr_v = cptr_np
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cidx_v = cidx_np
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cval_v = cval_np
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b_v = np.ascontiguousarray(b)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lo_v = lo_np
    cdef cnp.ndarray[cnp.float64_t, ndim=1] up_v = up_np
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y_v = y_np
    cdef cnp.ndarray[cnp.float64_t, ndim=1] d_v = d_np
    cdef cnp.ndarray[cnp.float64_t, ndim=1] alpha_v = alpha_np
    cdef cnp.ndarray[cnp.float64_t, ndim=1] caps_v = caps_np

    cdef _Prob p
    p.n = <int>n
    p.m = <int>m
    p.total = <int>total
    p.tol_opt = tol_opt
    p.pivot_tol = pivot_tol
    p.degen_step = degen_step
    p.refactor_every = refactor_every
    p.bland_after = bland_after
    p.max_iters = max_iters
    p.iterations = 0
    p.since_refactor = 0
    p.cptr = <long long *>cptr_v.data
    p.cidx = <long long *>cidx_v.data
    p.cval = <double *>cval_v.data
    p.b = <double *>b_v.data
    p.lo = <double *>lo_v.data
    p.up = <double *>up_v.data
    p.x = <double *>x_v.data
    p.vstat = <signed char *>vstat_v.data
    p.basis = <long long *>basis_v.data
    p.where_basic = <long long *>where_v.data
    p.Binv = <double *>Binv_v.data
    p.twin = <long long *>twin_v.data
    p.y = <double *>y_v.data
    p.d = <double *>d_v.data
    p.alpha = <double *>alpha_v.data
    p.caps = <double *>caps_v.data

    # phase 1: drive the artificial variables to zero
    cur_c1 = np.concatenate([np.zeros(n), np.ones(m)])
    status = _iterate(&p, cur_c1, True, Binv_np, basis_np, ATfull_np, x_np, b)
    if status == C_BREAKDOWN or status == C_UNBOUNDED:
        return _result(&p, c_arr, ATfull_np, BREAKDOWN, x_np, basis_np, vstat_np, Binv_np)
    if float(x_np[n:].sum()) > tol_feas:
        return _result(&p, c_arr, ATfull_np, INFEASIBLE, x_np, basis_np, vstat_np, Binv_np)

    # phase 2: original objective; artificials pinned to zero
    up_np[n:] = 0.0
    lo_np[n:] = 0.0
    for j in range(n, total):
        if vstat_np[j] != BASIC:
            vstat_np[j] = NB_FIXED
            x_np[j] = 0.0
    cur_c2 = np.concatenate([c_arr, np.zeros(m)])
    status = _iterate(&p, cur_c2, False, Binv_np, basis_np, ATfull_np, x_np, b)
    return _result(&p, c_arr, ATfull_np, status, x_np, basis_np, vstat_np, Binv_np)


cdef int _iterate(_Prob *p, object cur_c_np, bint phase1,
                  object np_Binv, object np_basis, object np_ATfull,
                  object np_x, object np_b):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cc_v = np.ascontiguousarray(cur_c_np)
    cdef double *cur_c = <double *>cc_v.data
    cdef long long n = p.n, m = p.m, total = p.total
    cdef bint bland = False
    cdef long long degen_run = 0
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] banned_np = np.zeros(total, dtype=np.uint8)
    cdef unsigned char *banned = <unsigned char *>banned_np.data
    cdef bint exhausted = False

    cdef long long j, k, q, r, leave, out, tw, row_tw
    cdef double viol_best, viol_j, dj, sigma, t, t_own, t_basic
    cdef double room_j, room_tw, a_k, cap, piv, best_abs, xj_new
    cdef signed char vs
    cdef int ok
    cdef long long free_cnt

    while True:
        if p.iterations >= p.max_iters:
            return C_BREAKDOWN
        if p.since_refactor >= p.refactor_every:
            ok = _refactor(p, np_Binv, np_basis, np_ATfull, np_x, np_b)
            if not ok:
                return C_BREAKDOWN

        _compute_y(p, cur_c)
        _compute_d(p, cur_c)

        # pricing: most-violating reduced cost (Dantzig), or Bland
        j = -1
        viol_best = 0.0
        for k in range(total):
            if banned[k]:
                continue
            vs = p.vstat[k]
            dj = p.d[k]
            if vs == C_NB_LO:
                viol_j = -dj
            elif vs == C_NB_UP:
                viol_j = dj
            elif vs == C_NB_FREE:
                viol_j = dj if dj > 0 else -dj
            else:
                continue
            if viol_j <= p.tol_opt:
                continue
            if bland:
                j = k
                break
            if viol_j > viol_best:
                viol_best = viol_j
                j = k
        if j < 0:
            if np.any(banned_np):
                if exhausted:
                    pass  # set-asides already retried; genuinely done
                else:
                    banned_np[:] = 0
                    exhausted = True
                    continue
            if p.since_refactor == 0:
                return C_OPTIMAL
            ok = _refactor(p, np_Binv, np_basis, np_ATfull, np_x, np_b)
            if not ok:
                return C_BREAKDOWN
            banned_np[:] = 0
            exhausted = False
            continue

        sigma = 1.0
        if p.vstat[j] == C_NB_UP or (p.vstat[j] == C_NB_FREE and p.d[j] > 0):
            sigma = -1.0

        tw = p.twin[j]
        if tw >= 0 and p.vstat[tw] == C_BASIC:
            # identical columns: value moves between the pair, basis
            # inverse untouched
            if sigma > 0:
                room_j = p.up[j] - p.x[j]
                room_tw = p.x[tw] - p.lo[tw]
            else:
                room_j = p.x[j] - p.lo[j]
                room_tw = p.up[tw] - p.x[tw]
            t = room_j if room_j < room_tw else room_tw
            if t == float("inf"):
                return C_UNBOUNDED
            p.iterations += 1
            banned_np[:] = 0
            exhausted = False
            if t <= p.degen_step:
                degen_run += 1
                if degen_run > p.bland_after * total:
                    bland = True
            else:
                degen_run = 0
                bland = False
            if room_j <= room_tw:
                p.x[j] = p.up[j] if sigma > 0 else p.lo[j]
                p.x[tw] -= sigma * t
                p.vstat[j] = C_NB_UP if sigma > 0 else C_NB_LO
            else:
                row_tw = p.where_basic[tw]
                p.x[j] += sigma * t
                p.x[tw] = p.lo[tw] if sigma > 0 else p.up[tw]
                p.vstat[tw] = C_NB_LO if sigma > 0 else C_NB_UP
                if p.lo[tw] == p.up[tw]:
                    p.vstat[tw] = C_NB_FIXED
                p.basis[row_tw] = j
                p.where_basic[tw] = -1
                p.where_basic[j] = row_tw
                p.vstat[j] = C_BASIC
            continue

        _compute_alpha(p, j)

        # ratio test
        t_own = p.up[j] - p.lo[j]
        t_basic = float("inf")
        for k in range(m):
            a_k = sigma * p.alpha[k]
            out = p.basis[k]
            if a_k > RATIO_TOL:
                cap = (p.x[out] - p.lo[out]) / a_k
            elif a_k < -RATIO_TOL:
                cap = (p.up[out] - p.x[out]) / (-a_k)
            else:
                p.caps[k] = float("inf")
                continue
            if cap < 0.0:
                cap = 0.0
            p.caps[k] = cap
            if cap < t_basic:
                t_basic = cap
        t = t_own if t_own < t_basic else t_basic
        if t == float("inf"):
            return C_UNBOUNDED

        leave = -1
        if t_basic <= t_own:
            if bland:
                out = -1
                for k in range(m):
                    if p.caps[k] <= t + 1e-15 and (out < 0 or p.basis[k] < out):
                        out = p.basis[k]
                        leave = k
            else:
                best_abs = -1.0
                for k in range(m):
                    if p.caps[k] <= t + 1e-15:
                        a_k = p.alpha[k] if p.alpha[k] >= 0 else -p.alpha[k]
                        if a_k > best_abs:
                            best_abs = a_k
                            leave = k

        p.iterations += 1
        if t <= p.degen_step:
            degen_run += 1
            if degen_run > p.bland_after * total:
                bland = True
        else:
            degen_run = 0
            bland = False

        if leave < 0:
            # bound flip: no basis change
            p.x[j] = p.up[j] if sigma > 0 else p.lo[j]
            for k in range(m):
                out = p.basis[k]
                p.x[out] = p.x[out] - sigma * t * p.alpha[k]
            p.vstat[j] = C_NB_UP if sigma > 0 else C_NB_LO
            banned_np[:] = 0
            exhausted = False
            continue

        piv = p.alpha[leave]
        if (piv if piv >= 0 else -piv) < PIVOT_ACCEPT:
            p.iterations -= 1
            if p.since_refactor > 0:
                ok = _refactor(p, np_Binv, np_basis, np_ATfull, np_x, np_b)
                if not ok:
                    return C_BREAKDOWN
                banned_np[:] = 0
                exhausted = False
                continue
            if not exhausted:
                banned[j] = 1
                continue
            if (piv if piv >= 0 else -piv) < p.pivot_tol:
                return C_BREAKDOWN
            p.iterations += 1  # no better pivot exists; take it reluctantly

        xj_new = p.x[j] + sigma * t
        for k in range(m):
            out = p.basis[k]
            p.x[out] = p.x[out] - sigma * t * p.alpha[k]
        p.x[j] = xj_new
        out = p.basis[leave]
        if p.lo[out] == p.up[out]:
            p.vstat[out] = C_NB_FIXED
            p.x[out] = p.lo[out]
        elif sigma * p.alpha[leave] > 0:
            p.vstat[out] = C_NB_LO
            p.x[out] = p.lo[out]
        else:
            p.vstat[out] = C_NB_UP
            p.x[out] = p.up[out]
        if phase1 and out >= n:
            # an artificial that leaves the basis never comes back
            p.vstat[out] = C_NB_FIXED
            p.lo[out] = 0.0
            p.up[out] = 0.0
            p.x[out] = 0.0
        p.basis[leave] = j
        p.where_basic[out] = -1
        p.where_basic[j] = leave
        p.vstat[j] = C_BASIC

        # eta update: Binv[leave] /= piv; Binv -= alpha ⊗ Binv[leave]
        for k in range(m):
            p.Binv[leave * m + k] /= piv
        for r in range(m):
            if r == leave:
                continue
            a_k = p.alpha[r]
            if a_k != 0.0:
                for k in range(m):
                    p.Binv[r * m + k] -= a_k * p.Binv[leave * m + k]
        p.since_refactor += 1
        banned_np[:] = 0
        exhausted = False


cdef object _result(_Prob *p, object c_arr, object np_ATfull, int status,
                    object np_x, object np_basis, object np_vstat, object np_Binv):
    n = p.n
    basis = np_basis.copy()
    x = np_x[:n].copy()
    cur_c = np.concatenate([c_arr, np.zeros(p.m)])
    y = np_Binv.T @ cur_c[basis]
    d = c_arr - np_ATfull[:n] @ y
    return {
        "status": status,
        "x": x,
        "objective": float(c_arr @ x),
        "iterations": int(p.iterations),
        "y": y,
        "d": d,
        "basis": basis,
        "vstat": np_vstat[:n].copy(),
    }
