# -*- coding: utf-8 -*-

import numpy as np

from .constants import MD1, MD2, MD3, MD4
from ..errors import ValidationError


class LinearSimConfig(object):
    """
    Generative parameters of the continuous-exposure, continuous-outcome
    design: Z = a0 + aX X + A T + e, Y = bZ Z + bX X + A W + eps, with
    cluster effects (T, W) bivariate normal.
    """

    FIELDS = ('m', 'n', 'alpha', 'beta_Z', 'beta_X', 'kappa', 'varrho', 'sigma_T', 'sigma_W',
              'rho_TW', 'mu_T', 'mu_W', 'zero_intercept_outcome')

    def __init__(self, m=50, n=2, alpha=(1.0, 1.0), beta_Z=1.0, beta_X=1.0, kappa=1.0, varrho=1.0,
                 sigma_T=1.0, sigma_W=1.0, rho_TW=0.0, mu_T=0.0, mu_W=0.0, zero_intercept_outcome=False):
        if int(m) < 2:
            raise ValidationError('m must be at least 2')
        if int(n) < 1:
            raise ValidationError('n must be at least 1')
        if len(alpha) != 2:
            raise ValidationError('alpha must be (alpha_0, alpha_X)')
        for name, value in (('kappa', kappa), ('varrho', varrho), ('sigma_T', sigma_T), ('sigma_W', sigma_W)):
            if not value > 0:
                raise ValidationError('{0} must be positive, got {1}'.format(name, value))
        if abs(rho_TW) > 1:
            raise ValidationError('rho_TW must lie in [-1, 1], got {0}'.format(rho_TW))

        self.m = int(m)
        self.n = int(n)
        self.alpha = (float(alpha[0]), float(alpha[1]))
        self.beta_Z = float(beta_Z)
        self.beta_X = float(beta_X)
        self.kappa = float(kappa)
        self.varrho = float(varrho)
        self.sigma_T = float(sigma_T)
        self.sigma_W = float(sigma_W)
        self.rho_TW = float(rho_TW)
        self.mu_T = float(mu_T)
        self.mu_W = float(mu_W)
        self.zero_intercept_outcome = bool(zero_intercept_outcome)

    def __repr__(self):
        return '<LinearSimConfig m={0} n={1} rho={2} sigma_T={3} sigma_W={4}>'.format(
            self.m, self.n, self.rho_TW, self.sigma_T, self.sigma_W)

    def as_dict(self):
        return dict((name, getattr(self, name)) for name in self.FIELDS)

    def replace(self, **changes):
        values = self.as_dict()
        values.update(changes)
        return LinearSimConfig(**values)

    @property
    def tw_covariance(self):
        c = self.rho_TW * self.sigma_T * self.sigma_W
        return np.array([[self.sigma_T ** 2, c], [c, self.sigma_W ** 2]])


class LinearModelVariant(object):
    """``exposure_re`` picks the BLUP balancing score, ``outcome_re`` the GLS fit."""

    def __init__(self, exposure_re=False, outcome_re=False):
        self.exposure_re = bool(exposure_re)
        self.outcome_re = bool(outcome_re)

    def __repr__(self):
        return '<LinearModelVariant {0}>'.format(self.name)

    def __eq__(self, other):
        return isinstance(other, LinearModelVariant) and (self.exposure_re, self.outcome_re) == (other.exposure_re, other.outcome_re)

    def __hash__(self):
        return hash((self.exposure_re, self.outcome_re))

    @property
    def name(self):
        for name, variant in VARIANTS.items():
            if variant == self:
                return name

    @classmethod
    def from_name(cls, name):
        try:
            return VARIANTS[name]
        except KeyError:
            raise ValidationError('unknown linear model {0!r}; expected one of {1}'.format(name, ', '.join(sorted(VARIANTS))))


VARIANTS = {
    MD1: LinearModelVariant(exposure_re=False, outcome_re=False),
    MD2: LinearModelVariant(exposure_re=True, outcome_re=False),
    MD3: LinearModelVariant(exposure_re=False, outcome_re=True),
    MD4: LinearModelVariant(exposure_re=True, outcome_re=True),
}


class EstimatorReport(object):
    """
    Linear estimator ``beta_hat = G Y`` of the outcome coefficients.

    ``G`` is 3 x N for the design [1 | Z | BS] and 2 x N when the outcome
    intercept is fixed at zero; ``z_index`` locates the exposure row.
    """

    def __init__(self, G, beta_hat, variant, z_index=1, bias_Z=None, var_Z=None):
        self.G = G
        self.beta_hat = beta_hat
        self.variant = variant
        self.z_index = z_index
        self.bias_Z = bias_Z
        self.var_Z = var_Z

    def __repr__(self):
        return '<EstimatorReport {0} beta_Z={1:.4f}>'.format(self.variant.name, self.beta_Z_hat)

    @property
    def beta_Z_hat(self):
        return float(self.beta_hat[self.z_index])

    @property
    def rmse(self):
        if self.bias_Z is None or self.var_Z is None:
            return None
        return float(np.sqrt(self.var_Z + self.bias_Z ** 2))

    def with_theory(self, bias_Z, var_Z):
        return EstimatorReport(self.G, self.beta_hat, self.variant, self.z_index, bias_Z, var_Z)
