# -*- coding: utf-8 -*-
"""
    Log densities of the prior families and the decay prior helper.
"""

import math

import numpy as np

from .constants import PRACTICAL_RANGE_FACTOR, DECAY_PRIOR_SD_RATIO
from ..errors import ValidationError

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def normal_logpdf(x, sd, mean=0.0):
    """Elementwise N(mean, sd^2) log density."""
    z = (np.asarray(x, dtype=float) - mean) / sd
    return -0.5 * z * z - np.log(sd) - _LOG_SQRT_2PI


def half_cauchy_logpdf(x, scale):
    """
    Half-Cauchy(0, scale) log density for x >= 0, -inf below zero.

    :param x: value of the scale parameter
    :type x: float
    :param scale: Half-Cauchy scale
    :type scale: float
    """
    if x < 0:
        return -np.inf
    return math.log(2.0 / (math.pi * scale)) - math.log1p((x / scale) ** 2)


def folded_normal_logpdf(x, mean, sd):
    """Log density of |V| with V ~ N(mean, sd^2), evaluated at x >= 0."""
    if x < 0:
        return -np.inf
    a = -0.5 * ((x - mean) / sd) ** 2
    b = -0.5 * ((x + mean) / sd) ** 2
    return np.logaddexp(a, b) - math.log(sd) - _LOG_SQRT_2PI


def folded_normal_decay_prior(max_distance, sd=None):
    """
    Decay prior whose location puts the practical range (correlation 0.05)
    at half the maximum inter-centroid distance. The sd defaults to
    ``DECAY_PRIOR_SD_RATIO`` times the location, which keeps the density
    mode at the location.

    Returns the ``decay_prior_mean``/``decay_prior_sd`` fragment of a
    PriorSpec, ready for ``PriorSpec.replace(**fragment)``.
    """
    if not np.isfinite(max_distance) or max_distance <= 0:
        raise ValidationError('max_distance must be positive, got {0}'.format(max_distance))
    mode = PRACTICAL_RANGE_FACTOR / (max_distance / 2.0)
    if sd is None:
        sd = DECAY_PRIOR_SD_RATIO * mode
    if not np.isfinite(sd) or sd <= 0:
        raise ValidationError('decay prior sd must be positive, got {0}'.format(sd))

    return {'decay_prior_mean': mode, 'decay_prior_sd': float(sd)}
