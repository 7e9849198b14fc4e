# -*- coding: utf-8 -*-
"""
    Design assembly and gated sampling shared by both stages.
"""

import logging

import numpy as np

from .constants import INTERCEPT_NAME
from ..analytic.linalg import check_rank
from ..core import CorrelationModel, EXPONENTIAL
from ..core.constants import PRACTICAL_RANGE_FACTOR
from ..errors import ConvergenceError, ValidationError
from ..mcmc import sample

log = logging.getLogger(__name__)


def assemble_design(n, columns, names, protected=()):
    """
    Stack an intercept of length ``n`` and ``columns`` into a design matrix. Constant
    columns are absorbed by the intercept and dropped, except those named in
    ``protected``, which must vary. The result must have full column rank.
    """
    kept_columns = [np.ones(n)]
    kept_names = [INTERCEPT_NAME]

    for values, name in zip(columns, names):
        values = np.asarray(values, dtype=float)
        if np.ptp(values) == 0:
            if name in protected:
                raise ValidationError('{0} is constant'.format(name))
            log.info('Dropping constant column {0}; absorbed by the intercept.'.format(name))
            continue
        kept_columns.append(values)
        kept_names.append(name)

    H = np.column_stack(kept_columns)
    check_rank(H, kept_names)
    return H, kept_names


def spatial_correlation(dataset):
    """Exponential correlation started at the prior location of the decay."""
    if dataset.centroids is None:
        raise ValidationError('spatial random effects require centroids')
    dmax = dataset.max_distance
    if not dmax > 0:
        raise ValidationError('all centroids coincide; the decay is not identified')
    return CorrelationModel(EXPONENTIAL, decay=PRACTICAL_RANGE_FACTOR / (dmax / 2.0))


def run_gated(spec, settings, label):
    """Sample ``spec`` and enforce the R-hat gate unless the settings waive it."""
    posterior, report = sample(spec, chains=settings.chains, iters=settings.iters, warmup=settings.warmup,
                               seed=settings.seed, workers=settings.workers,
                               rhat_threshold=settings.rhat_threshold)
    if not report.passed:
        message = '{0}: R-hat gate failed (max {1:.4f}, threshold {2})'.format(
            label, report.max_rhat, settings.rhat_threshold)
        if settings.enforce_gate:
            raise ConvergenceError(message, report=report)
        log.warning(message)
    return posterior, report
