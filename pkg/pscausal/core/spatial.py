# -*- coding: utf-8 -*-
"""
    Exponential correlation on cluster centroids.

    Distances are Euclidean on the planar coordinates exactly as stored; no
    projection is applied.
"""

import numpy as np

from scipy.linalg import cho_factor, LinAlgError
from scipy.spatial.distance import cdist, pdist

from .constants import DEFAULT_JITTER
from ..errors import ValidationError, SingularCovarianceError


def _check_centroids(centroids):
    centroids = np.asarray(centroids, dtype=float)
    if centroids.ndim != 2 or centroids.shape[1] != 2:
        raise ValidationError('centroids must be an m x 2 matrix, got shape {0}'.format(centroids.shape))
    if not np.all(np.isfinite(centroids)):
        raise ValidationError('centroids contain non-finite coordinates')
    return centroids


def pairwise_distances(centroids):
    centroids = _check_centroids(centroids)
    return cdist(centroids, centroids)


def max_pairwise_distance(centroids):
    centroids = _check_centroids(centroids)
    if centroids.shape[0] < 2:
        return 0.0
    return float(pdist(centroids).max())


def exponential_correlation(centroids, decay, jitter=0.0, distances=None):
    """
    R_ij = exp(-decay * ||s_i - s_j||).

    ``jitter`` is added to the diagonal; leave it at zero for the bare
    kernel and let :func:`factor_correlation` apply the factorization jitter.
    """
    if not np.isfinite(decay) or decay <= 0:
        raise ValidationError('decay must be positive, got {0}'.format(decay))

    if distances is None:
        distances = pairwise_distances(centroids)

    R = np.exp(-decay * distances)
    if jitter:
        R[np.diag_indices_from(R)] += jitter
    return R


def factor_correlation(R, jitter=DEFAULT_JITTER):
    """Lower Cholesky factor of R + jitter*I, as a scipy ``cho_factor`` pair."""
    R = np.array(R, dtype=float)
    R[np.diag_indices_from(R)] += jitter
    try:
        return cho_factor(R, lower=True, check_finite=False)
    except LinAlgError as err:
        raise SingularCovarianceError('correlation matrix is not positive definite after jitter {0}: {1}'.format(jitter, err))
