# -*- coding: utf-8 -*-

# Balance.
SMD_THRESHOLD = 0.10
UNWEIGHTED = 'Unweighted'
WEIGHTED_COLUMN = 'Weighted-{0}'

# Pareto-smoothed importance sampling.
PARETO_K_THRESHOLD = 0.7
PARETO_K_MIN = 1.0 / 3.0
GPD_PRIOR_WEIGHT = 10
GPD_QUADRATURE_PRIOR = 3
MIN_TAIL = 5

FIT_COLUMNS = ('model', 'elpd_waic', 'p_waic', 'waic', 'elpd_loo', 'p_loo', 'loo', 'n_high_k')

QUANTILE_LABELS = ('min', 'q25', 'median', 'q75', 'max')
