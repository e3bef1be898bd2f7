"""Configuration constants for infoanatomy.

This module centralizes tolerances, resource budgets and defaults so that
every analysis and the CLI agree on them.
"""

# Probability bookkeeping
PROBABILITY_TOLERANCE = 1e-12  # total mass and per-state outgoing mass
NONNEGATIVE_SLACK = 1e-9  # provably nonnegative measures are clamped above -slack
ATOM_CHECK_TOLERANCE = 1e-9

# Identity and convergence tolerances
IDENTITY_TOLERANCE = 1e-10
DERIVATIVE_TOLERANCE = 1e-9  # also bounds r_mu(window) - r_mu(window - 1)
RATE_CONVERGENCE = 1e-9  # h_L - hmu below this ends excess-entropy sums
SUBEXTENSIVE_TOLERANCE = 2e-2  # slowly converging block curves (Even E_R)
SYMMETRY_TOLERANCE = 2e-3  # unique(past) vs unique(future) at finite windows
PROPOSITION_TOLERANCE = 1e-2
PROPOSITION_RATE_TOLERANCE = 1e-3  # fitted co-information rate
CLASS_KEY_DECIMALS = 12  # rounding of normalized state vectors when grouping windows

# Resource budgets
MAX_WORD_ROWS = 2**22  # rows of an enumerated word distribution
MAX_PREDICTIVE_CLASSES = 50_000
MAX_WINDOW_CELLS = 2**24  # past classes * alphabet * future classes
MAX_ATOM_VARIABLES = 6
MAX_COINFORMATION_VARIABLES = 20
DENSE_STATIONARY_LIMIT = 64  # states; larger machines use power iteration
POWER_ITERATION_TOLERANCE = 1e-13
POWER_ITERATION_MAX_STEPS = 10**6

# Defaults
DEFAULT_WINDOW = 80  # past and future window length for the present-centric quantities
DEFAULT_MAX_BLOCK = 12
DEFAULT_FILTERED_BLOCK = 64
DEFAULT_COINFORMATION_BLOCK = 12
EXCESS_ENTROPY_MAX_BLOCK = 256
DEFAULT_SEED = 0

# Output
REPORT_DECIMALS = 5
CSV_DECIMALS = 6
SAMPLE_LINE_WIDTH = 80
