# -*- coding: utf-8 -*-
"""
    Stage one: the exposure model and its frozen plug-in propensity score.
"""

import logging

from collections import OrderedDict

import numpy as np

from scipy.special import expit

from .constants import (POSTERIOR_MEAN_PARAMS, POSTERIOR_MEAN_PS, PS_POINTS, PS_CLIP,
                        SEPARATION_EPS)
from .fitting import assemble_design, run_gated, spatial_correlation
from .models import PropensityModelKind, PropensityEstimate
from ..diagnostics import fit_report
from ..errors import ValidationError
from ..mcmc import LogisticMixedSpec, McmcSettings, NO_RANDOM_EFFECT, SPATIAL, pointwise_loglik
from ..mcmc.posterior import linear_predictor_draws

log = logging.getLogger(__name__)


def exposure_design(dataset):
    columns = [dataset.covariates[:, k] for k in range(dataset.covariates.shape[1])]
    return assemble_design(dataset.n_units, columns, dataset.covariate_names)


def build_propensity_spec(dataset, kind, priors=None):
    kind = kind if isinstance(kind, PropensityModelKind) else PropensityModelKind(kind)
    if dataset.continuous_exposure:
        raise ValidationError('propensity models need a binary exposure')

    H, names = exposure_design(dataset)
    if kind.re_kind == NO_RANDOM_EFFECT:
        return LogisticMixedSpec(H, names, dataset.exposure, priors=priors)
    if kind.re_kind == SPATIAL:
        return LogisticMixedSpec(H, names, dataset.exposure, cluster_map=dataset.cluster_map,
                                 re_correlation=spatial_correlation(dataset), priors=priors,
                                 centroids=dataset.centroids)
    return LogisticMixedSpec(H, names, dataset.exposure, cluster_map=dataset.cluster_map, priors=priors)


def estimate_propensity(dataset, kind, priors=None, settings=None, ps_point=POSTERIOR_MEAN_PARAMS,
                        separation_eps=SEPARATION_EPS, diagnose=False):
    """
    Fit the exposure model and freeze the propensity score.

    By default the score is expit of the linear predictor at the posterior
    means of the coefficients and cluster effects; ``posterior_mean_ps``
    averages expit over the draws instead. With ``diagnose`` the WAIC/LOO of
    the exposure fit is attached.
    """
    if ps_point not in PS_POINTS:
        raise ValidationError('unknown propensity point estimate {0!r}'.format(ps_point))
    kind = kind if isinstance(kind, PropensityModelKind) else PropensityModelKind(kind)
    settings = settings if settings is not None else McmcSettings()

    spec = build_propensity_spec(dataset, kind, priors)
    posterior, report = run_gated(spec, settings, 'propensity model {0}'.format(kind.name))

    means = posterior.draws.mean(axis=0)
    point = OrderedDict((name, float(v)) for name, v in zip(posterior.names, means))

    if ps_point == POSTERIOR_MEAN_PS:
        ps = np.zeros(spec.n_units)
        for _, lin in linear_predictor_draws(spec, posterior):
            ps += expit(lin).sum(axis=0)
        ps /= posterior.n_draws
    else:
        q = spec.n_fixed
        lin = spec.design.dot(means[:q])
        if spec.re_kind != NO_RANDOM_EFFECT:
            lin = lin + spec.cluster_map.expand(means[q:q + spec.n_clusters])
        ps = expit(lin)

    ps = np.clip(ps, PS_CLIP, 1.0 - PS_CLIP)

    fit = None
    if diagnose:
        fit = fit_report(pointwise_loglik(spec, posterior))

    estimate = PropensityEstimate(ps, kind, point_estimates=point, convergence=report, fit=fit, ps_point=ps_point)
    if estimate.separated(separation_eps):
        log.warning('{0}: fitted propensity scores within {1} of 0 or 1; possible separation.'.format(
            kind.name, separation_eps))
    log.info('{0}: propensity scores range {1:.4f}..{2:.4f}'.format(kind.name, ps.min(), ps.max()))
    return estimate
