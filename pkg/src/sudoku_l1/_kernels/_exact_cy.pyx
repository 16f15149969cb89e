# cython: boundscheck=False, wraparound=False, nonecheck=False, cdivision=True
"""Compiled backtracking kernel; traversal order matches exact_py exactly."""

from libc.string cimport memcpy

import numpy as np


cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #  define POPCNT(x) __builtin_popcount((unsigned)(x))
    #else
    static int POPCNT(unsigned x) { int c = 0; while (x) { x &= x - 1; ++c; } return c; }
    #endif
    """
    int POPCNT(unsigned int x) nogil


cdef struct _State:
    int side
    int n
    unsigned int full
    long long cap
    long long count
    signed char *grid
    unsigned int *rows
    unsigned int *cols
    unsigned int *boxes
    int *box_of
    signed char *first
    int have_first
    signed char *sink


cdef void _search(_State *st) noexcept nogil:
    cdef int best_i = -1, best_pc = st.side + 1
    cdef unsigned int best_cand = 0, cand, bit
    cdef int i, r, c, pc, d
    for i in range(st.n):
        if st.grid[i] == 0:
            r = i / st.side
            c = i - r * st.side
            cand = st.full & ~(st.rows[r] | st.cols[c] | st.boxes[st.box_of[i]])
            pc = POPCNT(cand)
            if pc == 0:
                return
            if pc < best_pc:
                best_pc = pc
                best_i = i
                best_cand = cand
                if pc == 1:
                    break
    if best_i == -1:
        if not st.have_first:
            memcpy(st.first, st.grid, st.n)
            st.have_first = 1
        if st.sink != NULL:
            memcpy(st.sink + st.count * st.n, st.grid, st.n)
        st.count += 1
        return
    r = best_i / st.side
    c = best_i - r * st.side
    cdef int b = st.box_of[best_i]
    for d in range(st.side):
        bit = (<unsigned int> 1) << d
        if best_cand & bit:
            st.grid[best_i] = <signed char> (d + 1)
            st.rows[r] |= bit
            st.cols[c] |= bit
            st.boxes[b] |= bit
            _search(st)
            st.rows[r] &= ~bit
            st.cols[c] &= ~bit
            st.boxes[b] &= ~bit
            st.grid[best_i] = 0
            if st.count >= st.cap:
                return


cdef object _prepare(object grid, int box_order, long long cap, bint want_all):
    cdef int side = box_order * box_order
    cdef int n = side * side
    g = np.ascontiguousarray(grid, dtype=np.int8).reshape(-1).copy()
    if g.shape[0] != n:
        raise ValueError(f"expected {n} cells, got {g.shape[0]}")
    if want_all and cap > 50_000_000 // n:
        raise ValueError("enumeration cap too large")

    rows = np.zeros(side, dtype=np.uint32)
    cols = np.zeros(side, dtype=np.uint32)
    boxes = np.zeros(side, dtype=np.uint32)
    box_of = np.empty(n, dtype=np.intc)
    first = np.zeros(n, dtype=np.int8)
    sink = np.zeros((max(cap, 1) if want_all else 1, n), dtype=np.int8)

    cdef signed char[::1] gv = g
    cdef unsigned int[::1] rv = rows
    cdef unsigned int[::1] cv = cols
    cdef unsigned int[::1] bv = boxes
    cdef int[::1] ov = box_of
    cdef signed char[::1] fv = first
    cdef signed char[:, ::1] sv = sink

    cdef int i, r, c, b, v
    cdef unsigned int bit
    for i in range(n):
        r = i / side
        c = i - r * side
        ov[i] = (r / box_order) * box_order + c / box_order
    for i in range(n):
        v = gv[i]
        if v == 0:
            continue
        if v < 1 or v > side:
            raise ValueError(f"cell value {v} out of range 1..{side}")
        bit = (<unsigned int> 1) << (v - 1)
        r = i / side
        c = i - r * side
        b = ov[i]
        if (rv[r] | cv[c] | bv[b]) & bit:
            raise ValueError("grid contains a duplicated clue")
        rv[r] = rv[r] | bit
        cv[c] = cv[c] | bit
        bv[b] = bv[b] | bit

    cdef _State st
    st.side = side
    st.n = n
    st.full = ((<unsigned int> 1) << side) - 1
    st.cap = cap
    st.count = 0
    st.grid = &gv[0]
    st.rows = &rv[0]
    st.cols = &cv[0]
    st.boxes = &bv[0]
    st.box_of = &ov[0]
    st.first = &fv[0]
    st.have_first = 0
    st.sink = &sv[0, 0] if want_all else NULL
    if cap >= 1:
        with nogil:
            _search(&st)
    return st.count, (first if st.have_first else None), (sink[:st.count].copy() if want_all else None)


def count_completions(grid, int box_order, long long cap):
    """Count completions of ``grid`` (flat, 0 = empty), stopping at ``cap``.

    Returns ``(count, first)`` where ``first`` is the first completion found
    in traversal order, or ``None`` if there is none.
    """
    count, first, _ = _prepare(grid, box_order, cap, False)
    return count, first


def enumerate_completions(grid, int box_order, long long cap):
    """Return up to ``cap`` completions as an (count, side²) int8 array."""
    _, _, sink = _prepare(grid, box_order, cap, True)
    return sink
