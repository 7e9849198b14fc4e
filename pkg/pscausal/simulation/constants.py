# -*- coding: utf-8 -*-

# Output layout.
CSV_COLUMNS = ('n', 'rho', 'sigma2_T', 'sigma2_W', 'model', 'metric', 'value')

# Presets of the linear grid.
PAPER = 'paper'
DESK = 'desk'
PRESETS = (PAPER, DESK)

PAPER_SIGMA2_GRID = tuple(round(0.3 * k, 1) for k in range(1, 11))
DESK_SIGMA2_GRID = (0.3, 1.2, 2.1, 3.0)
DEFAULT_N_SET = (2, 5, 10, 20)
DEFAULT_RHO_SET = (0.0, 0.3, 0.5)
PAPER_REPLICATES = 1000
DESK_REPLICATES = 200

# Linear grid metrics.
ABS_BIAS = 'abs_bias'
RMSE = 'rmse'
ABS_ERROR = 'abs_error'
FAILED = 'failed'
LINEAR_METRICS = (ABS_BIAS, RMSE, ABS_ERROR, FAILED)

# Binary study: (unit sd of upsilon, cluster sd of zeta) per X scenario.
X_SCENARIOS = {
    1: (0.1, 0.4),
    2: (0.25, 1.0),
}

# Correlation of the cluster effects per case; case 3 sets W = T.
TW_CASES = {
    1: 0.0,
    2: 0.5,
    3: 1.0,
}
IDENTICAL_CASE = 3

BINARY_ALPHA = (1.0, 1.0, 1.0)
BINARY_BETA = (0.0, 0.5, -0.5, 0.25)
BINARY_COVARIATES = ('X1', 'X2')

# Binary study metrics.
ATE_MEAN = 'ate_mean'
OR_MEAN = 'or_mean'
COVERS_ZERO = 'covers_zero'
SMD_METRIC = 'smd_{0}'
CONVERGED = 'converged'
MEDIAN_ABS_BIAS = 'median_abs_bias'
MEDIAN_RMSE = 'median_rmse'
SMD_EXCEED_RATE = 'smd_exceed_rate'
EXCLUDED_REPLICATES = 'excluded_replicates'

MAX_NONCONVERGED_FRACTION = 0.2
