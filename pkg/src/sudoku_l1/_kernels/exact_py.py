"""Pure-Python backtracking kernel.

Candidate sets are bitmasks; the search always branches on a most-constrained
cell (ties broken row-major, singles taken immediately) and tries digits in
ascending order, so the traversal — and therefore the enumeration order — is
identical to the compiled kernel's.
"""

from __future__ import annotations

import numpy as np


def _box_of(side: int, box_order: int) -> list[int]:
    return [
        (i // side // box_order) * box_order + (i % side) // box_order
        for i in range(side * side)
    ]


def count_completions(grid, box_order: int, cap: int) -> tuple[int, np.ndarray | None]:
    """Count completions of ``grid`` (flat, 0 = empty), stopping at ``cap``.

    Returns ``(count, first)`` where ``first`` is the first completion found
    in traversal order, or ``None`` if there is none.
    """
    count, first, _ = _run(grid, box_order, cap, want_all=False)
    return count, first


def enumerate_completions(grid, box_order: int, cap: int) -> np.ndarray:
    """Return up to ``cap`` completions as an (count, side²) int8 array."""
    _, _, sink = _run(grid, box_order, cap, want_all=True)
    side = box_order * box_order
    if not sink:
        return np.empty((0, side * side), dtype=np.int8)
    return np.array(sink, dtype=np.int8)


def _run(grid, box_order, cap, want_all):
    side = box_order * box_order
    n = side * side
    cells = [int(v) for v in np.asarray(grid, dtype=np.int8).ravel()]
    if len(cells) != n:
        raise ValueError(f"expected {n} cells, got {len(cells)}")
    full = (1 << side) - 1
    box_of = _box_of(side, box_order)
    rows = [0] * side
    cols = [0] * side
    boxes = [0] * side
    for i, v in enumerate(cells):
        if v == 0:
            continue
        if not 1 <= v <= side:
            raise ValueError(f"cell value {v} out of range 1..{side}")
        bit = 1 << (v - 1)
        r, c = divmod(i, side)
        b = box_of[i]
        if (rows[r] | cols[c] | boxes[b]) & bit:
            raise ValueError("grid contains a duplicated clue")
        rows[r] |= bit
        cols[c] |= bit
        boxes[b] |= bit

    count = 0
    first: np.ndarray | None = None
    sink: list[list[int]] = []

    def search() -> None:
        nonlocal count, first
        best_i, best_cand, best_pc = -1, 0, side + 1
        for i in range(n):
            if cells[i] == 0:
                r, c = divmod(i, side)
                cand = full & ~(rows[r] | cols[c] | boxes[box_of[i]])
                pc = cand.bit_count()
                if pc == 0:
                    return
                if pc < best_pc:
                    best_i, best_cand, best_pc = i, cand, pc
                    if pc == 1:
                        break
        if best_i == -1:
            if first is None:
                first = np.array(cells, dtype=np.int8)
            if want_all:
                sink.append(cells.copy())
            count += 1
            return
        r, c = divmod(best_i, side)
        b = box_of[best_i]
        for d in range(side):
            bit = 1 << d
            if best_cand & bit:
                cells[best_i] = d + 1
                rows[r] |= bit
                cols[c] |= bit
                boxes[b] |= bit
                search()
                rows[r] &= ~bit
                cols[c] &= ~bit
                boxes[b] &= ~bit
                cells[best_i] = 0
                if count >= cap:
                    return

    if cap >= 1:
        search()
    return count, first, sink
