# -*- coding: utf-8 -*-

from .constants import CSV_COLUMNS, PAPER, DESK, PRESETS, X_SCENARIOS, TW_CASES
from .models import LinearGridSpec, BinarySimConfig, ReplicateSummary
from .linear import run_linear_grid, replicate_estimates, preset, cell_metric
from .binary import generate_binary, run_binary_study, run_replicate, BinaryStudyResult
