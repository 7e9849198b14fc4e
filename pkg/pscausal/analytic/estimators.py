# -*- coding: utf-8 -*-
"""
    Linear Gaussian case: data generation, balancing scores, outcome fits and
    the exact conditional bias and variance of the exposure coefficient.

    With ``S = varrho^2 I + sigma_T^2 A A^T`` the covariance of Z given X,

        E(Y | Z, X)   = bZ Z + bX X + mu_W 1 + rho sT sW A A^T S^-1 (Z - (a0 + mu_T) 1 - aX X)
        Var(Y | Z, X) = kappa^2 I + sW^2 A (I - rho^2 sT^2 A^T S^-1 A) A^T

    and every estimator here is linear, ``beta_hat = G Y``.
"""

import logging

import numpy as np

from .constants import WOODBURY
from .linalg import BlockCovariance, check_rank, ols_projector, gls_projector
from .models import EstimatorReport
from ..core import Dataset, build_cluster_map
from ..errors import ValidationError
from ..utils import make_rng

log = logging.getLogger(__name__)

X_NAME = 'X'


def _cluster_ids(m, n):
    return np.repeat(np.arange(1, m + 1), n)


def correlated_effects(rng, m, mu_T, mu_W, sigma_T, sigma_W, rho):
    """Cluster effects (T, W) with correlation rho; rho = 1 with equal moments gives T == W."""
    z = rng.standard_normal((2, m))
    T = mu_T + sigma_T * z[0]
    W = mu_W + sigma_W * (rho * z[0] + np.sqrt(max(0.0, 1.0 - rho ** 2)) * z[1])
    return T, W


def generate_linear(cfg, seed):
    """
    Draw one data set from ``cfg``.

    Returns ``(dataset, latent)`` where ``latent`` holds the cluster effects
    ``T`` and ``W`` (length m) for oracle checks.
    """
    rng = make_rng(seed)
    ids = _cluster_ids(cfg.m, cfg.n)
    cluster_map = build_cluster_map(ids)
    N = cfg.m * cfg.n

    X = rng.standard_normal(N)
    T, W = correlated_effects(rng, cfg.m, cfg.mu_T, cfg.mu_W, cfg.sigma_T, cfg.sigma_W, cfg.rho_TW)

    a0, aX = cfg.alpha
    Z = a0 + aX * X + cluster_map.expand(T) + cfg.varrho * rng.standard_normal(N)
    Y = cfg.beta_Z * Z + cfg.beta_X * X + cluster_map.expand(W) + cfg.kappa * rng.standard_normal(N)

    dataset = Dataset(Y, Z, X[:, None], ids, covariate_names=[X_NAME], binary_covariates=[],
                      continuous_exposure=True)
    return dataset, {'T': T, 'W': W}


def _exposure_design(dataset):
    H = np.column_stack([np.ones(dataset.n_units), dataset.covariates])
    check_rank(H, ['intercept'] + list(dataset.covariate_names))
    return H


def balancing_score_fixed(dataset):
    """Fitted values of the OLS regression of Z on [1 | X]."""
    H = _exposure_design(dataset)
    return H.dot(ols_projector(H).dot(dataset.exposure))


def balancing_score_mixed(dataset, sigma_T, varrho=1.0, method=WOODBURY):
    """
    GLS exposure coefficients and BLUP cluster effects with known variances.

    Returns ``(bs, alpha_hat, nu_hat)`` with
    ``bs = [1 | X] alpha_hat + A nu_hat``.
    """
    H = _exposure_design(dataset)
    Z = dataset.exposure
    S = BlockCovariance(dataset.cluster_map, varrho ** 2, sigma_T ** 2, method=method)

    alpha_hat = gls_projector(H, S).dot(Z)
    residual = Z - H.dot(alpha_hat)
    nu_hat = sigma_T ** 2 * dataset.cluster_map.collapse(S.solve(residual))

    bs = H.dot(alpha_hat) + dataset.cluster_map.expand(nu_hat)
    return bs, alpha_hat, nu_hat


def _x(dataset):
    return dataset.covariate(X_NAME) if X_NAME in dataset.covariate_names else dataset.covariates[:, 0]


def _exposure_covariance(cfg, dataset, method):
    return BlockCovariance(dataset.cluster_map, cfg.varrho ** 2, cfg.sigma_T ** 2, method=method)


def _confounding_shift(cfg, dataset, S):
    """rho sT sW A A^T S^-1 (Z - (a0 + mu_T) 1 - aX X)."""
    a0, aX = cfg.alpha
    centred = dataset.exposure - (a0 + cfg.mu_T) - aX * _x(dataset)
    weight = cfg.rho_TW * cfg.sigma_T * cfg.sigma_W
    cm = dataset.cluster_map
    return weight * cm.expand(cm.collapse(S.solve(centred)))


def _cluster_shrinkage(cfg, S):
    """I - rho^2 sT^2 A^T S^-1 A (m x m)."""
    P = S.cluster_precision()
    return np.eye(P.shape[0]) - cfg.rho_TW ** 2 * cfg.sigma_T ** 2 * P


def conditional_moments_Y(cfg, dataset, method=WOODBURY):
    """Mean vector and dense covariance matrix of Y given (Z, X)."""
    S = _exposure_covariance(cfg, dataset, method)
    X = _x(dataset)

    mean = cfg.beta_Z * dataset.exposure + cfg.beta_X * X + cfg.mu_W + _confounding_shift(cfg, dataset, S)

    A = dataset.cluster_map.dense()
    cov = cfg.kappa ** 2 * np.eye(dataset.n_units) + cfg.sigma_W ** 2 * A.dot(_cluster_shrinkage(cfg, S)).dot(A.T)
    return mean, 0.5 * (cov + cov.T)


def outcome_design(dataset, bs, zero_intercept=False):
    columns = [dataset.exposure, np.asarray(bs, dtype=float)]
    names = ['Z', 'BS']
    if not zero_intercept:
        columns.insert(0, np.ones(dataset.n_units))
        names.insert(0, 'intercept')

    H = np.column_stack(columns)
    check_rank(H, names)
    return H


def fit_linear_outcome(dataset, bs, variant, cfg, method=WOODBURY):
    """
    Regress Y on [1 | Z | BS] by OLS (no outcome random effect) or by GLS
    under the known covariance ``kappa^2 I + sigma_W^2 A A^T``.
    """
    H = outcome_design(dataset, bs, cfg.zero_intercept_outcome)

    if variant.outcome_re:
        G = gls_projector(H, BlockCovariance(dataset.cluster_map, cfg.kappa ** 2, cfg.sigma_W ** 2, method=method))
    else:
        G = ols_projector(H)

    z_index = 0 if cfg.zero_intercept_outcome else 1
    return EstimatorReport(G, G.dot(dataset.outcome), variant, z_index=z_index)


def theoretical_bias_variance(report, cfg, dataset, method=WOODBURY):
    """
    Conditional bias and variance of the exposure coefficient given (Z, X).

    The ``mu_W 1`` term only matters for the zero-intercept outcome design,
    since ``G 1`` picks out the intercept otherwise.
    """
    G = report.G
    if G.shape[1] != dataset.n_units:
        raise ValidationError('estimator has {0} columns for {1} units'.format(G.shape[1], dataset.n_units))

    S = _exposure_covariance(cfg, dataset, method)
    iz = report.z_index

    shifted = cfg.beta_X * _x(dataset) + cfg.mu_W + _confounding_shift(cfg, dataset, S)
    bias = float(G[iz].dot(shifted))

    GA = dataset.cluster_map.assignment.T.dot(G.T).T
    g = G[iz]
    ga = GA[iz]
    var = cfg.kappa ** 2 * g.dot(g) + cfg.sigma_W ** 2 * ga.dot(_cluster_shrinkage(cfg, S)).dot(ga)
    return bias, float(var)


def evaluate_linear_model(dataset, bs, variant, cfg, method=WOODBURY):
    """Fit and attach the theoretical bias and variance in one step."""
    report = fit_linear_outcome(dataset, bs, variant, cfg, method=method)
    bias, var = theoretical_bias_variance(report, cfg, dataset, method=method)
    return report.with_theory(bias, var)
