# -*- coding: utf-8 -*-
"""
    WAIC and Pareto-smoothed importance-sampling LOO from an L x N matrix of
    pointwise log-likelihood values (draws by observations).
"""

import logging

import numpy as np
import pandas as pd

from scipy.special import logsumexp

from .constants import (PARETO_K_THRESHOLD, PARETO_K_MIN, GPD_PRIOR_WEIGHT, GPD_QUADRATURE_PRIOR, MIN_TAIL,
                        FIT_COLUMNS)
from .models import FitReport
from ..errors import ValidationError

log = logging.getLogger(__name__)


def _check_loglik(loglik):
    loglik = np.asarray(loglik, dtype=float)
    if loglik.ndim != 2 or loglik.shape[0] < 2 or loglik.shape[1] < 1:
        raise ValidationError('loglik must be an L x N matrix with L >= 2 draws')
    if not np.all(np.isfinite(loglik)):
        raise ValidationError('loglik contains non-finite values')
    return loglik


def lppd_pointwise(loglik):
    """log mean_l exp(loglik[l, i]) per observation."""
    return logsumexp(loglik, axis=0) - np.log(loglik.shape[0])


def waic(loglik):
    """elpd_waic = sum_i lppd_i - sum_i Var_l(loglik[:, i])."""
    loglik = _check_loglik(loglik)
    lppd = lppd_pointwise(loglik)
    p_i = np.var(loglik, axis=0)
    elpd_i = lppd - p_i
    return FitReport(elpd_waic=float(elpd_i.sum()), p_waic=float(p_i.sum()),
                     pointwise={'lppd': lppd, 'p_waic': p_i, 'elpd_waic': elpd_i})


def gpd_fit(x):
    """
    Empirical Bayes estimate (k, sigma) of the generalized Pareto
    distribution for sorted positive exceedances ``x``.
    """
    n = x.size
    m = 30 + int(np.sqrt(n))

    i = np.arange(1, m + 1, dtype=float)
    bs = 1.0 - np.sqrt(m / (i - 0.5))
    bs = bs / (GPD_QUADRATURE_PRIOR * x[int(n / 4.0 + 0.5) - 1]) + 1.0 / x[-1]

    ks = np.mean(np.log1p(-bs[:, None] * x), axis=1)
    L = n * (np.log(-bs / ks) - ks - 1.0)
    w = 1.0 / np.sum(np.exp(L - L[:, None]), axis=1)

    keep = w >= 10 * np.finfo(float).eps
    bs, w = bs[keep], w[keep] / w[keep].sum()

    b = np.sum(bs * w)
    k = np.mean(np.log1p(-b * x))
    sigma = -k / b
    k = k * n / (n + GPD_PRIOR_WEIGHT) + GPD_PRIOR_WEIGHT * 0.5 / (n + GPD_PRIOR_WEIGHT)
    return k, sigma


def gpd_quantile(p, k, sigma):
    if abs(k) < np.finfo(float).eps:
        return -sigma * np.log1p(-p)
    return sigma * np.expm1(-k * np.log1p(-p)) / k


def psis_smooth(log_weights):
    """
    Smooth one column of raw log importance weights.

    Returns (normalized log weights, k-hat, truncated). When the tail holds
    fewer than five draws the weights are truncated at ``mean(w) sqrt(S)``
    instead and k-hat is NaN.
    """
    x = np.asarray(log_weights, dtype=float)
    S = x.size
    x = x - x.max()

    cutoff_index = -int(np.ceil(min(0.2 * S, 3.0 * np.sqrt(S)))) - 1
    order = np.argsort(x)
    cutoff = max(x[order[cutoff_index]], np.log(np.finfo(float).tiny))
    tail = np.flatnonzero(x > cutoff)

    if tail.size < MIN_TAIL:
        cap = logsumexp(x) - np.log(S) + 0.5 * np.log(S)
        x = np.minimum(x, cap)
        return x - logsumexp(x), np.nan, True

    tail = tail[np.argsort(x[tail])]
    exp_cutoff = np.exp(cutoff)
    k, sigma = gpd_fit(np.exp(x[tail]) - exp_cutoff)

    if k >= PARETO_K_MIN and np.isfinite(k):
        quantiles = (np.arange(tail.size) + 0.5) / tail.size
        x[tail] = np.log(gpd_quantile(quantiles, k, sigma) + exp_cutoff)
        x = np.minimum(x, 0.0)

    return x - logsumexp(x), float(k), False


def loo(loglik, k_threshold=PARETO_K_THRESHOLD):
    """
    PSIS leave-one-out: raw weights 1 / p(y_i | theta_l), smoothed per
    observation. k-hat above ``k_threshold`` is flagged, never fatal.
    """
    loglik = _check_loglik(loglik)
    n = loglik.shape[1]

    elpd_i = np.empty(n)
    k_hat = np.empty(n)
    truncated = np.zeros(n, dtype=bool)
    for i in range(n):
        lw, k_hat[i], truncated[i] = psis_smooth(-loglik[:, i])
        elpd_i[i] = logsumexp(lw + loglik[:, i])

    lppd = lppd_pointwise(loglik)
    report = FitReport(elpd_loo=float(elpd_i.sum()), p_loo=float(np.sum(lppd - elpd_i)),
                       pointwise={'elpd_loo': elpd_i, 'pareto_k': k_hat},
                       pareto_k=k_hat, truncated=truncated, k_threshold=k_threshold)

    if report.n_high_k:
        log.warning('{0} of {1} observations have Pareto k-hat above {2}.'.format(report.n_high_k, n, k_threshold))
    if report.n_truncated:
        log.debug('Truncated importance sampling used for {0} observations.'.format(report.n_truncated))
    return report


def fit_report(loglik, k_threshold=PARETO_K_THRESHOLD):
    return waic(loglik).merge(loo(loglik, k_threshold=k_threshold))


def compare_fits(fits):
    """
    One row per named FitReport, in the given order, with the columns of
    the model comparison tables.
    """
    items = list(fits.items()) if isinstance(fits, dict) else list(fits)
    if not items:
        raise ValidationError('no fits to compare')

    rows = []
    for name, report in items:
        row = report.as_dict()
        row['model'] = name
        rows.append(dict((column, row[column]) for column in FIT_COLUMNS))
    return pd.DataFrame(rows, columns=list(FIT_COLUMNS))
