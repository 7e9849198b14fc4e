# -*- coding: utf-8 -*-
"""
    Covariances of the form ``unit_var * I + cluster_var * A A^T`` and design
    checks shared by the estimators.
"""

import numpy as np

from scipy.linalg import cho_factor, cho_solve, qr, solve_triangular, LinAlgError

from .constants import DENSE, WOODBURY, SOLVE_METHODS, RANK_TOLERANCE
from ..errors import ValidationError, RankDeficiencyError, SingularCovarianceError


class BlockCovariance(object):
    """
    ``unit_var * I_N + cluster_var * A A^T`` for a ClusterMap ``A``.

    With ``method='woodbury'`` solves use the per-cluster closed form
    ``(v - A (cluster_var A^T v / (unit_var + cluster_var n_j))) / unit_var``;
    ``method='dense'`` builds the matrix and uses a Cholesky factor.
    """

    def __init__(self, cluster_map, unit_var, cluster_var, method=WOODBURY):
        if method not in SOLVE_METHODS:
            raise ValidationError('unknown solve method {0!r}'.format(method))
        if unit_var < 0 or cluster_var < 0:
            raise ValidationError('variances must be non-negative')

        self.cluster_map = cluster_map
        self.unit_var = float(unit_var)
        self.cluster_var = float(cluster_var)
        self.method = method
        self._factor = None

        if self.unit_var <= 0:
            sizes = cluster_map.cluster_sizes
            if self.cluster_var <= 0 or np.any(sizes > 1):
                raise SingularCovarianceError('covariance is singular with unit variance {0}'.format(unit_var))

        if method == DENSE:
            try:
                self._factor = cho_factor(self.dense(), lower=True)
            except LinAlgError as err:
                raise SingularCovarianceError('covariance factorization failed: {0}'.format(err))

    def dense(self):
        A = self.cluster_map.dense()
        return self.unit_var * np.eye(self.cluster_map.n_units) + self.cluster_var * A.dot(A.T)

    def _collapse(self, v):
        A = self.cluster_map.assignment
        return A.T.dot(v)

    def matvec(self, v):
        v = np.asarray(v, dtype=float)
        return self.unit_var * v + self.cluster_var * self.cluster_map.expand(self._collapse(v).T).T

    def solve(self, v):
        v = np.asarray(v, dtype=float)
        if self.method == DENSE:
            return cho_solve(self._factor, v)

        shrink = self.cluster_var / (self.unit_var + self.cluster_var * self.cluster_map.cluster_sizes)
        collapsed = self._collapse(v)
        if collapsed.ndim == 2:
            collapsed = collapsed * shrink[:, None]
        else:
            collapsed = collapsed * shrink
        return (v - self.cluster_map.expand(collapsed.T).T) / self.unit_var

    def cluster_precision(self):
        """A^T Sigma^-1 A as an m x m matrix."""
        if self.method == DENSE:
            A = self.cluster_map.dense()
            return A.T.dot(cho_solve(self._factor, A))

        sizes = self.cluster_map.cluster_sizes
        return np.diag(sizes / (self.unit_var + self.cluster_var * sizes))


def check_rank(H, names=None):
    """Raise RankDeficiencyError when H has a singular value below the tolerance."""
    s = np.linalg.svd(H, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        raise RankDeficiencyError('design matrix is empty or zero', rank=0, columns=names)

    rank = int(np.sum(s > RANK_TOLERANCE * s[0]))
    if rank < H.shape[1]:
        raise RankDeficiencyError('design matrix has rank {0} < {1} columns'.format(rank, H.shape[1]),
                                  rank=rank, columns=names)


def ols_projector(H):
    """G = (H^T H)^-1 H^T via a thin QR factorization."""
    Q, R = qr(H, mode='economic')
    return solve_triangular(R, Q.T)


def gls_projector(H, covariance):
    """G = (H^T S^-1 H)^-1 H^T S^-1 for a BlockCovariance S."""
    SH = covariance.solve(H)
    try:
        factor = cho_factor(H.T.dot(SH), lower=True)
    except LinAlgError as err:
        raise RankDeficiencyError('GLS normal equations are singular: {0}'.format(err))
    return cho_solve(factor, SH.T)
