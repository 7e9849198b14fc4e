# -*- coding: utf-8 -*-
"""
    Standardized mean differences and propensity overlap.
"""

import logging

from collections import OrderedDict

import numpy as np
import pandas as pd

from .constants import SMD_THRESHOLD, UNWEIGHTED, WEIGHTED_COLUMN
from .models import SmdReport, PositivitySummary
from ..errors import ValidationError

log = logging.getLogger(__name__)


def ate_weights(ps, exposure):
    """omega = z / ps + (1 - z) / (1 - ps)."""
    ps = np.asarray(ps, dtype=float)
    z = np.asarray(exposure, dtype=float)
    if np.any(ps <= 0) or np.any(ps >= 1):
        raise ValidationError('propensity scores must lie strictly inside (0, 1)')
    return z / ps + (1.0 - z) / (1.0 - ps)


def weighted_mean(x, w):
    return np.sum(w * x) / np.sum(w)


def weighted_variance(x, w):
    """Frequency-weights variance: sum(w) / (sum(w)^2 - sum(w^2)) * sum(w (x - xbar_w)^2)."""
    total = np.sum(w)
    denominator = total ** 2 - np.sum(w ** 2)
    if not denominator > 0:
        return np.nan
    return total / denominator * np.sum(w * (x - weighted_mean(x, w)) ** 2)


def smd(values, exposure, weights=None, binary_covariate=False):
    """
    Standardized mean difference treated minus control.

    Continuous: (xbar_t - xbar_c) / sqrt((S_t^2 + S_c^2) / 2). Binary: the
    prevalence analogue with p (1 - p) in place of the variances. With
    ``weights`` the group means, prevalences and variances are their
    weighted versions. Returns NaN when the pooled variance is zero.
    """
    x = np.asarray(values, dtype=float)
    z = np.asarray(exposure)
    if x.shape != z.shape:
        raise ValidationError('values and exposure must have the same length')
    if not np.all(np.isin(z, (0, 1))):
        raise ValidationError('exposure must be binary')

    treated, control = z == 1, z == 0
    if not treated.any() or not control.any():
        raise ValidationError('both exposure groups must be non-empty')

    if weights is None:
        w = np.ones_like(x)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != x.shape:
            raise ValidationError('weights must have the same length as values')
        if np.any(~(w > 0)):
            raise ValidationError('weights must be strictly positive')

    xt, wt = x[treated], w[treated]
    xc, wc = x[control], w[control]
    mean_t, mean_c = weighted_mean(xt, wt), weighted_mean(xc, wc)

    if binary_covariate:
        var_t = mean_t * (1.0 - mean_t)
        var_c = mean_c * (1.0 - mean_c)
    elif weights is None:
        var_t = np.var(xt, ddof=1) if xt.size > 1 else np.nan
        var_c = np.var(xc, ddof=1) if xc.size > 1 else np.nan
    else:
        var_t, var_c = weighted_variance(xt, wt), weighted_variance(xc, wc)

    pooled = (var_t + var_c) / 2.0
    if not pooled > 0:
        return np.nan
    return float((mean_t - mean_c) / np.sqrt(pooled))


def _named_scores(ps_estimates):
    """Accept a mapping name -> ps vector or objects carrying ``name`` and ``ps``."""
    if ps_estimates is None:
        return []
    if isinstance(ps_estimates, dict):
        return list(ps_estimates.items())
    return [(estimate.name, estimate.ps) for estimate in ps_estimates]


def balance_table(dataset, ps_estimates=None, covariates=None, threshold=SMD_THRESHOLD):
    """
    SMD per covariate: unweighted, then one ATE-weighted column per
    propensity model, with each unit weighted by its own exposure and score.
    """
    names = list(dataset.covariate_names if covariates is None else covariates)
    z = dataset.exposure

    columns = OrderedDict()
    columns[UNWEIGHTED] = [smd(dataset.covariate(name), z, binary_covariate=name in dataset.binary_covariates)
                           for name in names]

    for label, ps in _named_scores(ps_estimates):
        ps = np.asarray(ps, dtype=float)
        if ps.shape != z.shape:
            raise ValidationError('propensity score {0} has {1} values for {2} units'.format(label, ps.size, z.size))
        w = ate_weights(ps, z)
        columns[WEIGHTED_COLUMN.format(label)] = [
            smd(dataset.covariate(name), z, weights=w, binary_covariate=name in dataset.binary_covariates)
            for name in names]

    report = SmdReport(pd.DataFrame(columns, index=pd.Index(names, name='covariate')), threshold=threshold)

    for column in report.columns:
        exceeded = report.exceeds(column)
        if exceeded:
            log.info('{0}: SMD above {1:.0%} for {2}'.format(column, threshold, ', '.join(exceeded)))
    degenerate = report.degenerate.values.any()
    if degenerate:
        log.warning('Zero pooled variance for some covariates; SMD reported as not-a-value.')
    return report


def _five_numbers(values):
    return [float(v) for v in np.percentile(values, [0, 25, 50, 75, 100])]


def positivity_summary(ps, exposure):
    ps = np.asarray(ps, dtype=float)
    z = np.asarray(exposure)
    treated, control = ps[z == 1], ps[z == 0]
    if treated.size == 0 or control.size == 0:
        raise ValidationError('both exposure groups must be non-empty')

    summary = PositivitySummary(_five_numbers(treated), _five_numbers(control),
                                (float(max(treated.min(), control.min())),
                                 float(min(treated.max(), control.max()))))
    if summary.empty_overlap:
        log.warning('Propensity score ranges of treated and control units do not overlap.')
    return summary
