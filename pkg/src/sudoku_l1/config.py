"""Central home for every numerical tolerance used by the package.

Keeping them in one module makes the accuracy/robustness trade-offs auditable
and lets tests pin them down instead of chasing magic numbers through the code.
"""

from __future__ import annotations

# --- uniqueness certificate ---------------------------------------------
# Margin forced between on-support and off-support rows of the certificate
# system; the off-support bound is 1 - CERT_EPSILON.
CERT_EPSILON = 1e-4
# A certificate counts as found when the optimal residual is below this.
CERT_RESIDUAL_TOL = 1e-6

# --- simplex -------------------------------------------------------------
LP_OPT_TOL = 1e-9  # reduced-cost optimality threshold
LP_FEAS_TOL = 1e-8  # phase-1 residual allowed at a feasible point
LP_PIVOT_TOL = 1e-11  # below this a pivot element is a numerical breakdown
LP_DEGENERATE_STEP = 1e-12  # steps shorter than this count as degenerate
LP_REFACTOR_EVERY = 500  # basis-inverse refresh cadence (iterations)
LP_BLAND_AFTER = 2  # switch to Bland's rule after this * n degenerate pivots

# --- support / interior point --------------------------------------------
# Cap in the maximal-support program.  Correct as long as the uniform
# average of the per-index maximizers keeps every supported coordinate
# above it; those maxima are vertex coordinates (>= ~1/4 in practice), and
# there are at most side^3 of them, so the average stays >= ~3e-4 on a 9x9
# grid.  1e-6 leaves two orders of margin there and ten above float noise.
SUPPORT_DELTA = 1e-6
RANK_PIVOT_TOL = 1e-9  # pivot threshold in the rank computation
NEWTON_DECREMENT_TOL = 1e-10  # analytic-center stopping criterion
NEWTON_RESIDUAL_TOL = 1e-8  # equality residual required of the center
NEWTON_RIDGE = 1e-12  # singular-value cutoff in the KKT least-squares solves
NEWTON_MAX_ITER = 200

# --- solving / classification --------------------------------------------
DECODE_TOL = 1e-6  # margin for reading an indicator vector as a 0/1 grid
ROUND_DECIMALS = 4  # values are rounded to this many places before repair
ALT_SOLUTION_TOL = 1e-6  # inf-norm distance that counts as a distinct optimum
CROSS_CHECK_DRAWS = 20  # random objectives per cross-check
