# -*- coding: utf-8 -*-

import math

import numpy as np

from .constants import (PAPER_SIGMA2_GRID, DEFAULT_N_SET, DEFAULT_RHO_SET, PAPER_REPLICATES, X_SCENARIOS, TW_CASES,
                        BINARY_ALPHA, BINARY_BETA, IDENTICAL_CASE)
from ..analytic import LinearSimConfig
from ..analytic.constants import WOODBURY, SOLVE_METHODS
from ..errors import ValidationError


class LinearGridSpec(object):
    """
    Grid of the linear study. ``sigma2_grid`` holds the variances of T and
    W (both axes); every cell gets ``replicates`` data sets.
    """

    FIELDS = ('m', 'n_set', 'sigma2_grid', 'rho_set', 'replicates', 'mu_T', 'mu_W', 'zero_intercept', 'seed',
              'method')

    def __init__(self, m=50, n_set=DEFAULT_N_SET, sigma2_grid=PAPER_SIGMA2_GRID, rho_set=DEFAULT_RHO_SET,
                 replicates=PAPER_REPLICATES, mu_T=0.0, mu_W=0.0, zero_intercept=False, seed=0, method=WOODBURY):
        n_set, sigma2_grid, rho_set = tuple(n_set), tuple(sigma2_grid), tuple(rho_set)
        if not n_set or not sigma2_grid or not rho_set:
            raise ValidationError('grids must be non-empty')
        if int(replicates) < 1:
            raise ValidationError('replicates must be at least 1')
        if any(not s > 0 for s in sigma2_grid):
            raise ValidationError('variances must be positive')
        if any(abs(r) > 1 for r in rho_set):
            raise ValidationError('correlations must lie in [-1, 1]')
        if method not in SOLVE_METHODS:
            raise ValidationError('unknown solve method {0!r}'.format(method))

        self.m = int(m)
        self.n_set = tuple(int(n) for n in n_set)
        self.sigma2_grid = tuple(float(s) for s in sigma2_grid)
        self.rho_set = tuple(float(r) for r in rho_set)
        self.replicates = int(replicates)
        self.mu_T = float(mu_T)
        self.mu_W = float(mu_W)
        self.zero_intercept = bool(zero_intercept)
        self.seed = int(seed)
        self.method = method

    def __repr__(self):
        return '<LinearGridSpec cells={0} replicates={1}>'.format(len(self.cells()), self.replicates)

    def as_dict(self):
        return dict((name, getattr(self, name)) for name in self.FIELDS)

    def replace(self, **changes):
        values = self.as_dict()
        values.update(changes)
        return LinearGridSpec(**values)

    def cells(self):
        """(n, rho, sigma2_T, sigma2_W) in a fixed order."""
        return [(n, rho, s2t, s2w) for n in self.n_set for rho in self.rho_set
                for s2t in self.sigma2_grid for s2w in self.sigma2_grid]

    def config(self, cell):
        n, rho, s2t, s2w = cell
        return LinearSimConfig(m=self.m, n=n, sigma_T=math.sqrt(s2t), sigma_W=math.sqrt(s2w), rho_TW=rho,
                               mu_T=self.mu_T, mu_W=self.mu_W, zero_intercept_outcome=self.zero_intercept)


class BinarySimConfig(object):
    FIELDS = ('m', 'n', 'x_scenario', 'tw_case', 'alpha', 'beta', 'sigma_T', 'sigma_W', 'mu_T', 'mu_W',
              'replicates', 'seed')

    def __init__(self, m=50, n=4, x_scenario=1, tw_case=1, alpha=BINARY_ALPHA, beta=BINARY_BETA, sigma_T=1.0,
                 sigma_W=1.0, mu_T=0.0, mu_W=0.0, replicates=PAPER_REPLICATES, seed=0):
        if x_scenario not in X_SCENARIOS:
            raise ValidationError('x_scenario must be one of {0}'.format(sorted(X_SCENARIOS)))
        if tw_case not in TW_CASES:
            raise ValidationError('tw_case must be one of {0}'.format(sorted(TW_CASES)))
        if int(replicates) < 1:
            raise ValidationError('replicates must be at least 1')
        if int(m) < 2 or int(n) < 1:
            raise ValidationError('need m >= 2 clusters of n >= 1 units')
        if len(alpha) != 3 or len(beta) != 4:
            raise ValidationError('alpha has 3 and beta 4 coefficients')
        if not sigma_T > 0 or not sigma_W > 0:
            raise ValidationError('cluster effect scales must be positive')

        self.m = int(m)
        self.n = int(n)
        self.x_scenario = int(x_scenario)
        self.tw_case = int(tw_case)
        self.alpha = tuple(float(a) for a in alpha)
        self.beta = tuple(float(b) for b in beta)
        self.sigma_T = float(sigma_T)
        self.sigma_W = float(sigma_W)
        self.mu_T = float(mu_T)
        self.mu_W = float(mu_W)
        self.replicates = int(replicates)
        self.seed = int(seed)

    def __repr__(self):
        return '<BinarySimConfig scenario={0} case={1} replicates={2}>'.format(
            self.x_scenario, self.tw_case, self.replicates)

    def as_dict(self):
        return dict((name, getattr(self, name)) for name in self.FIELDS)

    def replace(self, **changes):
        values = self.as_dict()
        values.update(changes)
        return BinarySimConfig(**values)

    @property
    def rho(self):
        return TW_CASES[self.tw_case]

    @property
    def identical_effects(self):
        return self.tw_case == IDENTICAL_CASE

    @property
    def x_sds(self):
        return X_SCENARIOS[self.x_scenario]


class ReplicateSummary(object):
    """One fitted model on one replicate; the true ATE is zero."""

    def __init__(self, replicate, model, ate_mean, ate_sd, or_mean=None, covers_zero=None, smd_by_covariate=None,
                 converged=True):
        self.replicate = replicate
        self.model = model
        self.ate_mean = float(ate_mean)
        self.ate_sd = float(ate_sd)
        self.or_mean = or_mean
        self.covers_zero = covers_zero
        self.smd_by_covariate = smd_by_covariate if smd_by_covariate is not None else {}
        self.converged = bool(converged)

    def __repr__(self):
        return '<ReplicateSummary {0}#{1} bias={2:.4f}>'.format(self.model, self.replicate, self.abs_bias)

    @property
    def abs_bias(self):
        return abs(self.ate_mean)

    @property
    def rmse(self):
        return float(np.sqrt(self.ate_sd ** 2 + self.ate_mean ** 2))
