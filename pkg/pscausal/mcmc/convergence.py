# -*- coding: utf-8 -*-
"""
    Rank-normalized split R-hat and effective sample size.
"""

import numpy as np

from scipy.stats import norm, rankdata

from .constants import RHAT_THRESHOLD, RANK_OFFSET
from .models import ConvergenceReport


def _split_chains(values):
    """(chains, draws, params) -> (2 * chains, draws // 2, params), dropping the middle draw if odd."""
    half = values.shape[1] // 2
    return np.concatenate([values[:, :half], values[:, values.shape[1] - half:]], axis=0)


def _z_scale(values):
    """Normal scores of the pooled ranks, per parameter."""
    chains, draws, params = values.shape
    flat = values.reshape(chains * draws, params)
    ranks = np.apply_along_axis(rankdata, 0, flat, method='average')
    z = norm.ppf((ranks - RANK_OFFSET) / (flat.shape[0] - 2.0 * RANK_OFFSET + 1.0))
    return z.reshape(chains, draws, params)


def _rhat(values):
    """Classic potential scale reduction over split chains; NaN where a chain is constant."""
    chains, n, params = values.shape
    if n < 2:
        return np.full(params, np.nan)
    chain_mean = values.mean(axis=1)
    chain_var = values.var(axis=1, ddof=1)

    between = n * chain_mean.var(axis=0, ddof=1)
    within = chain_var.mean(axis=0)

    with np.errstate(divide='ignore', invalid='ignore'):
        out = np.sqrt(((n - 1.0) / n * within + between / n) / within)
    out[~(within > 0)] = np.nan
    return out


def rhat_values(values):
    """
    Max of bulk and folded-tail rank-normalized split R-hat for an array of
    shape (chains, draws, params).
    """
    values = np.asarray(values, dtype=float)
    if values.ndim == 2:
        values = values[:, :, None]

    split = _split_chains(values)
    bulk = _rhat(_z_scale(split))

    folded = np.abs(split - np.median(split.reshape(-1, split.shape[2]), axis=0))
    tail = _rhat(_z_scale(folded))

    out = np.fmax(bulk, tail)
    # Constant chains: ranks carry no information.
    constant = ~(split.var(axis=1, ddof=1).min(axis=0) > 0)
    out[constant] = np.nan
    return out


def _autocovariance(x):
    """Autocovariance of a 1-d series via FFT."""
    n = x.size
    size = 2 ** int(np.ceil(np.log2(2 * n)))
    centred = x - x.mean()
    spectrum = np.fft.rfft(centred, n=size)
    acov = np.fft.irfft(spectrum * np.conjugate(spectrum), n=size)[:n]
    return acov / n


def _ess_one(values):
    """Geyer initial positive and monotone sequence estimate for one (chains, draws) array."""
    chains, n = values.shape
    if n < 4:
        return np.nan
    acov = np.stack([_autocovariance(values[c]) for c in range(chains)])
    chain_mean = values.mean(axis=1)
    mean_var = acov[:, 0].mean() * n / (n - 1.0)
    var_plus = mean_var * (n - 1.0) / n
    if chains > 1:
        var_plus += chain_mean.var(ddof=1)
    if not var_plus > 0:
        return np.nan

    rho = np.zeros(n)
    rho[0] = 1.0
    rho[1] = 1.0 - (mean_var - acov[:, 1].mean()) / var_plus

    t = 1
    while t < n - 3:
        rho[t + 1] = 1.0 - (mean_var - acov[:, t + 1].mean()) / var_plus
        rho[t + 2] = 1.0 - (mean_var - acov[:, t + 2].mean()) / var_plus
        if rho[t + 1] + rho[t + 2] < 0:
            break
        t += 2
    max_t = t

    # Monotone sequence on the paired sums.
    t = 1
    while t <= max_t - 2:
        if rho[t + 1] + rho[t + 2] > rho[t - 1] + rho[t]:
            rho[t + 1] = (rho[t - 1] + rho[t]) / 2.0
            rho[t + 2] = rho[t + 1]
        t += 2

    total = chains * n
    tau = -1.0 + 2.0 * rho[:max_t + 1].sum() + rho[max_t + 1]
    tau = max(tau, 1.0 / np.log10(total))
    return total / tau


def ess_values(values):
    """Bulk effective sample size per parameter of a (chains, draws, params) array."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 2:
        values = values[:, :, None]
    split = _split_chains(values)
    z = _z_scale(split)
    return np.array([_ess_one(z[:, :, k]) if split[:, :, k].var() > 0 else np.nan
                     for k in range(values.shape[2])])


def effective_sample_size(sample, names=None):
    names = sample.names if names is None else list(names)
    return dict(zip(names, ess_values(sample.by_chain(names)).tolist()))


def rhat(sample, names=None, threshold=RHAT_THRESHOLD):
    """
    Convergence report over ``names`` (all parameters by default). The fit
    passes when every R-hat is finite and below ``threshold``.
    """
    names = sample.names if names is None else list(names)
    values = sample.by_chain(names)
    return ConvergenceReport(names, rhat_values(values), ess_values(values), threshold=threshold)
