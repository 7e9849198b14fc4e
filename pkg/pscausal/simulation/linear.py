# -*- coding: utf-8 -*-
"""
    Monte Carlo driver of the linear Gaussian study: for each grid cell,
    replicate data sets and average the exact bias and RMSE of the exposure
    coefficient under the four linear models.
"""

import logging

import numpy as np
import pandas as pd

from scipy.linalg import LinAlgError

from .constants import CSV_COLUMNS, ABS_BIAS, RMSE, ABS_ERROR, FAILED, PAPER, DESK, PAPER_SIGMA2_GRID, \
    DESK_SIGMA2_GRID, PAPER_REPLICATES, DESK_REPLICATES
from .models import LinearGridSpec
from ..analytic import LINEAR_MODELS, VARIANTS, generate_linear, balancing_score_fixed, balancing_score_mixed, \
    evaluate_linear_model
from ..errors import PsCausalError, ValidationError, raise_with_context
from ..utils import child_seed, parallel_map

log = logging.getLogger(__name__)


def preset(name, **changes):
    """Grid spec of a named preset, with ``changes`` applied on top."""
    if name == PAPER:
        spec = LinearGridSpec(sigma2_grid=PAPER_SIGMA2_GRID, replicates=PAPER_REPLICATES)
    elif name == DESK:
        spec = LinearGridSpec(sigma2_grid=DESK_SIGMA2_GRID, replicates=DESK_REPLICATES)
    else:
        raise ValidationError('unknown preset {0!r}'.format(name))
    return spec.replace(**changes) if changes else spec


def replicate_estimates(cfg, seed, method):
    """
    One data set, all four models: {model: (bias, variance, estimate error)}.
    """
    dataset, _ = generate_linear(cfg, seed)
    scores = {
        False: balancing_score_fixed(dataset),
        True: balancing_score_mixed(dataset, cfg.sigma_T, varrho=cfg.varrho, method=method)[0],
    }

    out = {}
    for name in LINEAR_MODELS:
        variant = VARIANTS[name]
        report = evaluate_linear_model(dataset, scores[variant.exposure_re], variant, cfg, method=method)
        out[name] = (report.bias_Z, report.var_Z, report.beta_Z_hat - cfg.beta_Z)
    return out


@raise_with_context('grid cell {0[0]}')
def _run_cell(task):
    index, cell, spec = task
    cfg = spec.config(cell)

    collected = dict((name, []) for name in LINEAR_MODELS)
    failed = 0
    for r in range(spec.replicates):
        try:
            estimates = replicate_estimates(cfg, child_seed(spec.seed, index, r), spec.method)
        except (PsCausalError, LinAlgError, np.linalg.LinAlgError) as err:
            failed += 1
            log.debug('Cell {0} replicate {1} failed: {2}'.format(index, r, err))
            continue
        for name, values in estimates.items():
            collected[name].append(values)

    n, rho, s2t, s2w = cell
    rows = []
    for name in LINEAR_MODELS:
        values = np.array(collected[name]).reshape(-1, 3)
        if values.shape[0]:
            bias, var, error = values[:, 0], values[:, 1], values[:, 2]
            metrics = [
                (ABS_BIAS, float(np.mean(np.abs(bias)))),
                (RMSE, float(np.mean(np.sqrt(var + bias ** 2)))),
                (ABS_ERROR, float(np.mean(np.abs(error)))),
            ]
        else:
            metrics = [(ABS_BIAS, np.nan), (RMSE, np.nan), (ABS_ERROR, np.nan)]
        metrics.append((FAILED, float(failed)))
        rows.extend((n, rho, s2t, s2w, name, metric, value) for metric, value in metrics)

    if failed:
        log.warning('Grid cell {0}: {1} of {2} replicates failed.'.format(cell, failed, spec.replicates))
    return rows


def run_linear_grid(spec, workers=1):
    """
    Long table with columns ``n, rho, sigma2_T, sigma2_W, model, metric,
    value``. Replicate ``r`` of cell ``c`` draws from the stream
    ``(seed, c, r)``, so the table does not depend on ``workers``.
    """
    cells = spec.cells()
    log.info('Linear grid: {0} cells x {1} replicates.'.format(len(cells), spec.replicates))

    results = parallel_map(_run_cell, [(k, cell, spec) for k, cell in enumerate(cells)], workers)
    rows = [row for cell_rows in results for row in cell_rows]
    return pd.DataFrame(rows, columns=list(CSV_COLUMNS))


def cell_metric(table, metric, model, **cell):
    """Single value of ``metric`` for ``model`` at the cell given by keyword filters."""
    mask = (table['metric'] == metric) & (table['model'] == model)
    for column, value in cell.items():
        mask &= np.isclose(table[column], value)
    values = table.loc[mask, 'value']
    if len(values) != 1:
        raise ValidationError('expected one row for {0}/{1} {2}, found {3}'.format(model, metric, cell, len(values)))
    return float(values.iloc[0])
