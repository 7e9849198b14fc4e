# -*- coding: utf-8 -*-

from .constants import SMD_THRESHOLD, PARETO_K_THRESHOLD, UNWEIGHTED, WEIGHTED_COLUMN
from .models import SmdReport, FitReport, PositivitySummary
from .balance import smd, balance_table, positivity_summary, ate_weights, weighted_variance
from .fit import waic, loo, fit_report, compare_fits, psis_smooth
