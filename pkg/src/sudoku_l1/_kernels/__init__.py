"""Kernel backend selection.

Each hot kernel ships as a compiled Cython extension plus a pure-Python
twin with the same interface.  The exact-cover kernels traverse search
trees identically and return identical results.  The simplex kernels run
the same algorithm with the same pivot rules, but their floating-point
summation orders differ, so on heavily degenerate problems they may walk
different (equally valid) pivot paths; they agree on status, optimal
objective, and feasibility, and each is deterministic on its own.

The compiled version is preferred when importable; set
``SUDOKU_L1_PURE_PYTHON=1`` to force the fallbacks (useful for
benchmarking and for debugging the kernels).
"""

from __future__ import annotations

import os

_FORCE_PURE = os.environ.get("SUDOKU_L1_PURE_PYTHON", "").strip() not in ("", "0")

if _FORCE_PURE:
    from . import exact_py as exact
else:
    try:
        from . import _exact_cy as exact  # type: ignore[no-redef]
    except ImportError:
        from . import exact_py as exact  # type: ignore[no-redef]

try:
    if _FORCE_PURE:
        from . import simplex_py as simplex
    else:
        try:
            from . import _simplex_cy as simplex  # type: ignore[no-redef]
        except ImportError:
            from . import simplex_py as simplex  # type: ignore[no-redef]
except ImportError:  # simplex kernels not present in minimal builds
    simplex = None  # type: ignore[assignment]


def backend_names() -> dict[str, str]:
    """Map kernel name -> implementation actually selected at import."""
    names = {"exact": exact.__name__.rsplit(".", 1)[-1]}
    if simplex is not None:
        names["simplex"] = simplex.__name__.rsplit(".", 1)[-1]
    return names
