# -*- coding: utf-8 -*-
"""
    Stage two: the outcome model with the frozen propensity score as a
    known covariate, and the ATE by averaging over the observed units.
"""

import logging

import numpy as np

from scipy.special import expit

from .constants import ADJUST_COVARIATES, ADJUST_PS, EXPOSURE_NAME, PS_COLUMN_NAME
from .fitting import assemble_design, run_gated, spatial_correlation
from .models import OutcomeModelKind, AtePosterior
from ..errors import ValidationError
from ..mcmc import LogisticMixedSpec, McmcSettings, NO_RANDOM_EFFECT, SPATIAL
from ..mcmc.constants import DRAW_CHUNK
from ..mcmc.posterior import linear_predictor_draws

log = logging.getLogger(__name__)


def _kind(outcome_kind):
    if isinstance(outcome_kind, OutcomeModelKind):
        return outcome_kind
    return OutcomeModelKind.from_name(outcome_kind)


def _check_ps(kind, ps, n_units):
    if not kind.requires_ps:
        return
    if ps is None:
        raise ValidationError('outcome model {0} needs a propensity estimate from {1}'.format(kind.name, kind.ps_kind))
    if ps.name != kind.ps_kind:
        raise ValidationError('outcome model {0} adjusts for {1}, got {2}'.format(kind.name, kind.ps_kind, ps.name))
    if ps.ps.size != n_units:
        raise ValidationError('propensity estimate covers {0} units, data has {1}'.format(ps.ps.size, n_units))


def outcome_design(dataset, outcome_kind, ps=None):
    """Intercept, exposure and the adjustment columns B of the outcome model."""
    kind = _kind(outcome_kind)
    _check_ps(kind, ps, dataset.n_units)

    columns = [dataset.exposure]
    names = [EXPOSURE_NAME]
    if kind.adjustment == ADJUST_COVARIATES:
        columns.extend(dataset.covariates[:, k] for k in range(dataset.covariates.shape[1]))
        names.extend(dataset.covariate_names)
    elif kind.adjustment == ADJUST_PS:
        columns.append(ps.ps)
        names.append(PS_COLUMN_NAME)

    return assemble_design(dataset.n_units, columns, names, protected=(EXPOSURE_NAME,))


def build_outcome_spec(dataset, outcome_kind, ps=None, priors=None):
    kind = _kind(outcome_kind)
    H, names = outcome_design(dataset, kind, ps)
    y = dataset.outcome

    if kind.random_effect == NO_RANDOM_EFFECT:
        return LogisticMixedSpec(H, names, y, priors=priors)
    if kind.random_effect == SPATIAL:
        return LogisticMixedSpec(H, names, y, cluster_map=dataset.cluster_map,
                                 re_correlation=spatial_correlation(dataset), priors=priors,
                                 centroids=dataset.centroids)
    return LogisticMixedSpec(H, names, y, cluster_map=dataset.cluster_map, priors=priors)


def fit_outcome_spec(dataset, outcome_kind, ps=None, priors=None, settings=None):
    """Returns (spec, posterior sample, convergence report)."""
    kind = _kind(outcome_kind)
    settings = settings if settings is not None else McmcSettings()
    spec = build_outcome_spec(dataset, kind, ps, priors)
    posterior, report = run_gated(spec, settings, 'outcome model {0}'.format(kind.name))
    posterior.info['convergence'] = report
    return spec, posterior, report


def fit_outcome(dataset, outcome_kind, ps=None, priors=None, settings=None):
    """
    Posterior draws of the outcome model. The propensity score enters the
    design as a fixed covariate and is never updated here.
    """
    return fit_outcome_spec(dataset, outcome_kind, ps, priors, settings)[1]


def ate_posterior(sample, dataset, outcome_kind, ps=None, priors=None, chunk=DRAW_CHUNK):
    """
    Per draw: mean over units of expit(lin | Z=1) minus the same with Z=0,
    every other term held at the unit's own values. OR = exp(beta_Z).
    """
    kind = _kind(outcome_kind)
    spec = build_outcome_spec(dataset, kind, ps, priors)
    if EXPOSURE_NAME in spec.pinned:
        raise ValidationError('the exposure coefficient cannot have a point-mass prior')

    missing = [name for name in spec.parameter_names if not sample.has(name)]
    if missing:
        raise ValidationError('sample does not match outcome model {0}; missing {1}'.format(
            kind.name, ', '.join(missing[:5])))

    z_index = spec.names.index(EXPOSURE_NAME)
    treated = spec.design.copy()
    treated[:, z_index] = 1.0
    control = spec.design.copy()
    control[:, z_index] = 0.0

    tau = np.empty(sample.n_draws)
    for (rows, lin1), (_, lin0) in zip(linear_predictor_draws(spec, sample, treated, chunk),
                                      linear_predictor_draws(spec, sample, control, chunk)):
        tau[rows] = expit(lin1).mean(axis=1) - expit(lin0).mean(axis=1)

    odds_ratio = np.exp(sample.column(EXPOSURE_NAME))
    return AtePosterior(tau, odds_ratio)


def relative_difference(with_effect, without_effect):
    """|a - b| / |b|, the absolute relative difference of two estimates."""
    if without_effect == 0:
        return float('nan')
    return abs(with_effect - without_effect) / abs(without_effect)


def relative_ate(report_with, report_without):
    """Absolute relative ATE difference between a model with an outcome random effect and its counterpart."""
    return relative_difference(_ate(report_with).ate_mean, _ate(report_without).ate_mean)


def relative_or(report_with, report_without):
    return relative_difference(_ate(report_with).or_mean, _ate(report_without).or_mean)


def _ate(report):
    return report if isinstance(report, AtePosterior) else report.ate
