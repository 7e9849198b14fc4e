# -*- coding: utf-8 -*-

import logging

import numpy as np

from .constants import EXPOSURE_NAME, POSTERIOR_MEAN_PARAMS, PROPENSITY_STAGE, OUTCOME_STAGE
from .models import OutcomeModelKind, PropensityModelKind, TwoStepReport
from .outcome import fit_outcome_spec, ate_posterior
from .propensity import estimate_propensity
from ..diagnostics import SMD_THRESHOLD, PARETO_K_THRESHOLD, balance_table, positivity_summary, fit_report
from ..errors import ValidationError
from ..mcmc import McmcSettings, pointwise_loglik
from ..utils import child_seed

log = logging.getLogger(__name__)


def stage_settings(settings, stage):
    """Settings of one stage, on its own sub-seed of the run seed."""
    return settings.replace(seed=child_seed(settings.seed, stage))


def two_step(dataset, ps_kind, outcome_kind, settings=None, priors=None, propensity=None,
             ps_point=POSTERIOR_MEAN_PARAMS, smd_threshold=SMD_THRESHOLD, k_threshold=PARETO_K_THRESHOLD,
             diagnose=True):
    """
    Plug-in two-step estimation.

    Stage one fits ``ps_kind`` (skipped when ``propensity`` is passed in or
    the outcome model needs no score) and freezes the score; stage two fits
    the outcome model with that score as a known covariate. Balance,
    positivity and WAIC/LOO are attached when ``diagnose`` is set.
    """
    kind = outcome_kind if isinstance(outcome_kind, OutcomeModelKind) else OutcomeModelKind.from_name(outcome_kind)
    settings = settings if settings is not None else McmcSettings()

    if ps_kind is not None:
        ps_kind = ps_kind if isinstance(ps_kind, PropensityModelKind) else PropensityModelKind(ps_kind)
    if kind.requires_ps:
        if ps_kind is None:
            ps_kind = PropensityModelKind(kind.ps_kind)
        elif ps_kind.name != kind.ps_kind:
            raise ValidationError('outcome model {0} adjusts for {1}, not {2}'.format(kind.name, kind.ps_kind, ps_kind.name))

    if propensity is None and ps_kind is not None:
        log.info('Stage one: fitting propensity model {0}.'.format(ps_kind.name))
        propensity = estimate_propensity(dataset, ps_kind, priors=priors,
                                         settings=stage_settings(settings, PROPENSITY_STAGE),
                                         ps_point=ps_point, diagnose=diagnose)

    frozen = None if propensity is None else propensity.ps.tobytes()

    log.info('Stage two: fitting outcome model {0}.'.format(kind.name))
    ps_used = propensity if kind.requires_ps else None
    spec, posterior, report = fit_outcome_spec(dataset, kind, ps_used, priors,
                                               stage_settings(settings, OUTCOME_STAGE))
    ate = ate_posterior(posterior, dataset, kind, ps_used, priors)

    if frozen is not None and propensity.ps.tobytes() != frozen:
        raise ValidationError('propensity estimate changed during the outcome stage')

    smd = positivity = fit = None
    if diagnose:
        smd = balance_table(dataset, [propensity] if propensity is not None else None, threshold=smd_threshold)
        if propensity is not None:
            positivity = positivity_summary(propensity.ps, dataset.exposure)
        fit = fit_report(pointwise_loglik(spec, posterior), k_threshold=k_threshold)

    log.info('{0}: ATE {1:.4f}, OR {2:.3f}'.format(kind.name, ate.ate_mean, ate.or_mean))
    return TwoStepReport(kind, propensity, posterior, report, ate, np.array(posterior.column(EXPOSURE_NAME)),
                         smd=smd, positivity=positivity, fit=fit, settings=settings, priors=priors)
