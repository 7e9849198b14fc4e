# -*- coding: utf-8 -*-
"""
    Binary exposure and binary outcome study with a null exposure effect.
"""

import logging

import numpy as np
import pandas as pd

from scipy.special import expit

from .constants import (CSV_COLUMNS, BINARY_COVARIATES, ABS_BIAS, RMSE, ATE_MEAN, OR_MEAN, COVERS_ZERO, SMD_METRIC,
                        CONVERGED, MEDIAN_ABS_BIAS, MEDIAN_RMSE, SMD_EXCEED_RATE, EXCLUDED_REPLICATES,
                        MAX_NONCONVERGED_FRACTION)
from .models import ReplicateSummary
from ..analytic import correlated_effects
from ..core import Dataset
from ..diagnostics import SMD_THRESHOLD, smd, ate_weights
from ..errors import NonConvergenceAbort, PsCausalError, raise_with_context
from ..mcmc import McmcSettings
from ..pipeline import PS1, PS2, BINARY_MODELS, OutcomeModelKind, estimate_propensity, two_step
from ..utils import make_rng, child_seed, parallel_map

log = logging.getLogger(__name__)

PROPENSITY_STREAM = 0
OUTCOME_STREAM = 1


def generate_binary(cfg, seed):
    """
    One data set: X_k = upsilon + zeta with unit-level upsilon and
    cluster-level zeta, Z and Y Bernoulli-logit, Y free of Z. Returns
    ``(dataset, {'T': ..., 'W': ...})``.
    """
    rng = make_rng(seed)
    m, n = cfg.m, cfg.n
    N = m * n
    ids = np.repeat(np.arange(1, m + 1), n)
    unit_sd, cluster_sd = cfg.x_sds

    X = unit_sd * rng.standard_normal((N, 2)) + cluster_sd * rng.standard_normal((m, 2))[ids - 1]
    T, W = correlated_effects(rng, m, cfg.mu_T, cfg.mu_W, cfg.sigma_T, cfg.sigma_W, cfg.rho)
    if cfg.identical_effects:
        W = T.copy()

    a0, a1, a2 = cfg.alpha
    b0, b1, b2, b3 = cfg.beta
    X1, X2 = X[:, 0], X[:, 1]
    Z = (rng.uniform(size=N) < expit(a0 + a1 * X1 + a2 * X2 + T[ids - 1])).astype(float)
    Y = (rng.uniform(size=N) < expit(b0 + b1 * X1 + b2 * X2 + b3 * X1 * X2 + W[ids - 1])).astype(float)

    dataset = Dataset(Y, Z, X, ids, covariate_names=list(BINARY_COVARIATES), binary_covariates=[])
    return dataset, {'T': T, 'W': W}


def _weighted_smds(dataset, estimate):
    w = ate_weights(estimate.ps, dataset.exposure)
    return dict((name, smd(dataset.covariate(name), dataset.exposure, weights=w)) for name in BINARY_COVARIATES)


def run_replicate(cfg, settings, replicate):
    """
    Fit PS1 and PS2, then MD1..MD4 on replicate ``replicate``. The gate is
    recorded, not enforced; a replicate converges when every fit passes.
    """
    seed = child_seed(cfg.seed, replicate)
    dataset, _ = generate_binary(cfg, seed)

    estimates = {}
    for k, kind in enumerate((PS1, PS2)):
        estimates[kind] = estimate_propensity(
            dataset, kind, settings=settings.replace(seed=child_seed(seed, PROPENSITY_STREAM, k), enforce_gate=False))

    converged = all(e.convergence.passed for e in estimates.values())
    smds = dict((kind, _weighted_smds(dataset, e)) for kind, e in estimates.items())

    summaries = []
    for k, name in enumerate(sorted(BINARY_MODELS)):
        kind = OutcomeModelKind.from_name(name)
        report = two_step(dataset, None, kind, propensity=estimates[kind.ps_kind], diagnose=False,
                          settings=settings.replace(seed=child_seed(seed, OUTCOME_STREAM, k), enforce_gate=False))
        converged = converged and report.convergence.passed
        summaries.append(ReplicateSummary(replicate, name, report.ate.ate_mean, report.ate.tau_summary['sd'],
                                          or_mean=report.ate.or_mean, covers_zero=report.ate.covers(0.0),
                                          smd_by_covariate=smds[kind.ps_kind]))

    for summary in summaries:
        summary.converged = converged
    return summaries


@raise_with_context('replicate {0[2]}')
def _replicate_task(task):
    cfg, settings, replicate = task
    try:
        return run_replicate(cfg, settings, replicate)
    except PsCausalError as err:
        log.warning('Replicate {0} failed and is excluded: {1}'.format(replicate, err))
        return []


class BinaryStudyResult(object):
    def __init__(self, cfg, summaries, excluded, total, smd_threshold=SMD_THRESHOLD):
        self.cfg = cfg
        self.summaries = summaries
        self.excluded = excluded
        self.total = total
        self.smd_threshold = smd_threshold

    def __repr__(self):
        return '<BinaryStudyResult replicates={0} excluded={1}>'.format(self.total, len(self.excluded))

    @property
    def kept(self):
        return [s for s in self.summaries if s.replicate not in self.excluded]

    def by_model(self, model):
        return [s for s in self.kept if s.model == model]

    def median_abs_bias(self, model):
        return float(np.median([s.abs_bias for s in self.by_model(model)]))

    def median_rmse(self, model):
        return float(np.median([s.rmse for s in self.by_model(model)]))

    def smd_values(self, ps_kind):
        """Weighted SMDs (replicates x covariates) under one propensity model."""
        anchor = sorted(name for name, spec in BINARY_MODELS.items() if spec[1] == ps_kind)[0]
        return np.array([[s.smd_by_covariate[c] for c in BINARY_COVARIATES] for s in self.by_model(anchor)])

    def smd_exceed_rate(self, ps_kind):
        values = self.smd_values(ps_kind)
        if values.size == 0:
            return float('nan')
        return float(np.mean(np.abs(values) > self.smd_threshold))

    def frame(self):
        cfg = self.cfg
        cell = (cfg.n, cfg.rho, cfg.sigma_T ** 2, cfg.sigma_W ** 2)
        rows = []
        models = sorted(BINARY_MODELS)

        for s in self.kept:
            for metric, value in ((ABS_BIAS, s.abs_bias), (RMSE, s.rmse), (ATE_MEAN, s.ate_mean),
                                  (OR_MEAN, s.or_mean), (COVERS_ZERO, float(s.covers_zero)),
                                  (CONVERGED, float(s.converged))):
                rows.append(cell + (s.model, metric, value))

        for kind in (PS1, PS2):
            for values in self.smd_values(kind):
                for name, value in zip(BINARY_COVARIATES, values):
                    rows.append(cell + (kind, SMD_METRIC.format(name), float(value)))

        for model in models:
            if self.by_model(model):
                rows.append(cell + (model, MEDIAN_ABS_BIAS, self.median_abs_bias(model)))
                rows.append(cell + (model, MEDIAN_RMSE, self.median_rmse(model)))
            rows.append(cell + (model, EXCLUDED_REPLICATES, float(len(self.excluded))))
        for kind in (PS1, PS2):
            rows.append(cell + (kind, SMD_EXCEED_RATE, self.smd_exceed_rate(kind)))

        return pd.DataFrame(rows, columns=list(CSV_COLUMNS))

    def as_dict(self):
        models = sorted(BINARY_MODELS)
        return {
            'config': self.cfg.as_dict(),
            'replicates': self.total,
            'excluded': sorted(self.excluded),
            'median_abs_bias': dict((m, self.median_abs_bias(m)) for m in models if self.by_model(m)),
            'median_rmse': dict((m, self.median_rmse(m)) for m in models if self.by_model(m)),
            'smd_exceed_rate': dict((k, self.smd_exceed_rate(k)) for k in (PS1, PS2)),
        }


def run_binary_study(cfg, settings=None, workers=1, max_nonconverged_fraction=MAX_NONCONVERGED_FRACTION,
                     smd_threshold=SMD_THRESHOLD):
    """
    Replicates run in parallel, each sequential inside. Replicates that fail
    the R-hat gate or raise are excluded and counted; more than
    ``max_nonconverged_fraction`` of them aborts the study.
    """
    settings = settings if settings is not None else McmcSettings()
    settings = settings.replace(workers=1)

    tasks = [(cfg, settings, r) for r in range(cfg.replicates)]
    results = parallel_map(_replicate_task, tasks, workers)

    summaries = [s for replicate in results for s in replicate]
    failed = set(r for r, replicate in enumerate(results) if not replicate)
    excluded = failed | set(s.replicate for s in summaries if not s.converged)

    log.info('Binary study: {0} of {1} replicates excluded.'.format(len(excluded), cfg.replicates))
    if len(excluded) > max_nonconverged_fraction * cfg.replicates:
        raise NonConvergenceAbort('{0} of {1} replicates failed the convergence gate (limit {2:.0%})'.format(
            len(excluded), cfg.replicates, max_nonconverged_fraction), excluded=len(excluded), total=cfg.replicates)

    return BinaryStudyResult(cfg, summaries, excluded, cfg.replicates, smd_threshold=smd_threshold)
