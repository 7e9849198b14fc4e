# -*- coding: utf-8 -*-
"""
    Log posterior of the Bernoulli-logit mixed model.

    Scale and decay enter on the log scale, so their terms include the
    log-Jacobian ``log(sigma)`` / ``log(decay)``.
"""

import math

import numpy as np

from scipy.linalg import cho_factor, cho_solve, solve_triangular, LinAlgError
from scipy.special import expit

from .constants import NO_RANDOM_EFFECT, SPATIAL, NEWTON_MAX_ITER, NEWTON_TOL, DRAW_CHUNK
from ..core import half_cauchy_logpdf, folded_normal_logpdf, normal_logpdf, factor_correlation
from ..errors import ValidationError

_LOG_2PI = math.log(2.0 * math.pi)


def bernoulli_logit_loglik(y, lin):
    """Pointwise y * lin - log(1 + exp(lin))."""
    return y * lin - np.logaddexp(0.0, lin)


def linear_predictor(spec, beta, eta=None):
    lin = spec.design.dot(beta)
    if eta is not None:
        lin = lin + spec.cluster_map.expand(eta)
    return lin


def correlation_factor(spec, decay):
    """Cholesky factor and log-determinant of R(decay) + jitter."""
    R = np.exp(-decay * spec.distances)
    factor = factor_correlation(R, spec.priors.jitter)
    logdet = 2.0 * np.sum(np.log(np.diag(factor[0])))
    return factor, logdet


def re_log_prior(spec, eta, scale, decay=None, factor=None):
    """N(0, scale^2 I) or N(0, scale^2 R(decay)) log density of the random effects."""
    m = eta.size
    if spec.re_kind == SPATIAL:
        if factor is None:
            factor, logdet = correlation_factor(spec, decay)
        else:
            factor, logdet = factor
        white = solve_triangular(factor[0], eta, lower=True)
        quad = white.dot(white)
        return -0.5 * m * _LOG_2PI - m * math.log(scale) - 0.5 * logdet - 0.5 * quad / scale ** 2
    return float(np.sum(normal_logpdf(eta, scale)))


def log_posterior_terms(spec, theta):
    """
    Named additive terms of the log posterior at ``theta``; their sum is
    :func:`log_posterior`.
    """
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise ValidationError('theta contains non-finite values')

    beta, eta, log_scale, log_decay = spec.split(theta)
    priors = spec.priors

    terms = {
        'loglik': float(np.sum(bernoulli_logit_loglik(spec.response, linear_predictor(spec, beta, eta)))),
        'fixed_prior': float(np.sum(normal_logpdf(beta, spec.fixed_sd))),
    }

    if spec.re_kind == NO_RANDOM_EFFECT:
        return terms

    if log_scale is None:
        scale = priors.re_scale_fixed
    else:
        scale = math.exp(log_scale)
        terms['scale_prior'] = half_cauchy_logpdf(scale, priors.re_scale_prior)
        terms['scale_jacobian'] = float(log_scale)

    decay = None
    if log_decay is not None:
        decay = math.exp(log_decay)
        terms['decay_prior'] = float(folded_normal_logpdf(decay, priors.decay_prior_mean, priors.decay_prior_sd))
        terms['decay_jacobian'] = float(log_decay)

    terms['re_prior'] = float(re_log_prior(spec, eta, scale, decay))
    return terms


def log_posterior(spec, theta):
    """Unnormalized log posterior at an unconstrained parameter vector."""
    return float(sum(log_posterior_terms(spec, theta).values()))


def fixed_effect_mode(spec, offset=None):
    """
    Penalized Newton iterations for the fixed effects with the random
    effects held at ``offset``. Returns the mode and the negative Hessian.
    """
    X, y = spec.design, spec.response
    precision = 1.0 / spec.fixed_sd ** 2
    offset = 0.0 if offset is None else offset

    def objective(beta):
        lin = X.dot(beta) + offset
        return np.sum(bernoulli_logit_loglik(y, lin)) - 0.5 * np.sum(precision * beta ** 2)

    beta = np.zeros(X.shape[1])
    current = objective(beta)
    for _ in range(NEWTON_MAX_ITER):
        p = expit(X.dot(beta) + offset)
        grad = X.T.dot(y - p) - precision * beta
        H = (X * (p * (1.0 - p))[:, None]).T.dot(X) + np.diag(precision)
        step = cho_solve(cho_factor(H), grad)

        t = 1.0
        while True:
            candidate = beta + t * step
            value = objective(candidate)
            if value >= current - 1e-12 or t < 1e-6:
                break
            t *= 0.5

        if value < current - 1e-12:
            break
        beta, previous, current = candidate, current, value
        if abs(current - previous) < NEWTON_TOL * (1.0 + abs(current)):
            break

    p = expit(X.dot(beta) + offset)
    H = (X * (p * (1.0 - p))[:, None]).T.dot(X) + np.diag(precision)
    return beta, H


def proposal_factor(H):
    """Lower Cholesky factor of H^-1."""
    try:
        cov = cho_solve(cho_factor(H), np.eye(H.shape[0]))
        return np.linalg.cholesky(0.5 * (cov + cov.T))
    except (LinAlgError, np.linalg.LinAlgError):
        return np.eye(H.shape[0])


def linear_predictor_draws(spec, sample, design=None, chunk=DRAW_CHUNK):
    """
    Yield (row slice, L_chunk x N linear predictors) over the draws of
    ``sample``; ``design`` replaces the fitted design for counterfactuals.
    """
    X = spec.design if design is None else design
    beta = sample.columns(spec.names)
    eta = None
    if spec.re_kind != NO_RANDOM_EFFECT:
        eta = sample.columns([name for name in spec.parameter_names if name.startswith('eta[')])

    for start in range(0, sample.n_draws, chunk):
        rows = slice(start, min(start + chunk, sample.n_draws))
        lin = beta[rows].dot(X.T)
        if eta is not None:
            lin = lin + spec.cluster_map.expand(eta[rows])
        yield rows, lin


def pointwise_loglik(spec, sample):
    """L x N matrix of per-draw, per-unit log likelihood values."""
    out = np.empty((sample.n_draws, spec.n_units))
    for rows, lin in linear_predictor_draws(spec, sample):
        out[rows] = bernoulli_logit_loglik(spec.response, lin)
    return out
