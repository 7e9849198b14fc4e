# -*- coding: utf-8 -*-
"""
    Random-effect blocks of the sampler. Each block knows its prior, how to
    update the cluster effects given everything else and how to keep its
    caches in step with the auxiliary moves on the scale and intercept.
"""

import math

import numpy as np

from scipy.linalg import cho_solve, solve_triangular

from .constants import NO_RANDOM_EFFECT, IID, SPATIAL
from .posterior import bernoulli_logit_loglik, correlation_factor
from ..core import folded_normal_logpdf
from ..errors import SingularCovarianceError


class BaseRandomEffect(object):
    kind = None

    def __init__(self, spec):
        self.spec = spec
        self.cluster_map = spec.cluster_map
        self.m = spec.n_clusters
        self.y = spec.response

    def init_cache(self, state):
        pass

    def quad(self, state):
        """eta^T C^-1 eta for the correlation C of the effects."""
        raise NotImplementedError

    def ones_quad(self, state):
        """1^T C^-1 1."""
        raise NotImplementedError

    def ones_dot(self, state):
        """1^T C^-1 eta."""
        raise NotImplementedError

    def update(self, state, rng):
        """Update the effects; returns a length-m acceptance indicator."""
        raise NotImplementedError

    def on_rescale(self, state, factor):
        pass

    def on_shift(self, state, shift):
        pass

    def scale_log_density(self, state, log_scale):
        """log p(eta | scale) up to terms free of the scale."""
        return -self.m * log_scale - 0.5 * self.quad(state) * math.exp(-2.0 * log_scale)


class NoRandomEffect(BaseRandomEffect):
    kind = NO_RANDOM_EFFECT


class IidRandomEffect(BaseRandomEffect):
    """
    Conditionally independent cluster effects: every cluster gets its own
    random-walk proposal in one vectorised sweep.
    """
    kind = IID

    def quad(self, state):
        return state.eta.dot(state.eta)

    def ones_quad(self, state):
        return float(self.m)

    def ones_dot(self, state):
        return state.eta.sum()

    def update(self, state, rng):
        cm = self.cluster_map
        eta = state.eta
        proposal = eta + state.re_steps * rng.standard_normal(self.m)

        lin_new = state.lin + cm.expand(proposal - eta)
        ll_new = bernoulli_logit_loglik(self.y, lin_new)

        log_ratio = cm.collapse(ll_new - state.ll) - 0.5 * (proposal ** 2 - eta ** 2) / state.scale ** 2
        accept = np.log(rng.uniform(size=self.m)) < log_ratio

        units = accept[cm.index]
        state.eta = np.where(accept, proposal, eta)
        state.lin = np.where(units, lin_new, state.lin)
        state.ll = np.where(units, ll_new, state.ll)
        state.ll_sum = state.ll.sum()
        return accept


class SpatialRandomEffect(BaseRandomEffect):
    """
    Effects with correlation R(decay): single-site updates under the
    conditional Gaussian prior, with ``r = R^-1 eta`` kept current.
    """
    kind = SPATIAL

    def __init__(self, spec):
        BaseRandomEffect.__init__(self, spec)
        order, slices = self.cluster_map.unit_slices()
        self.units = [order[s] for s in slices]

    def init_cache(self, state):
        factor, logdet = correlation_factor(self.spec, state.decay)
        self.set_factor(state, factor, logdet)

    def set_factor(self, state, factor, logdet):
        state.factor = factor
        state.logdet = logdet
        state.Rinv = cho_solve(factor, np.eye(self.m))
        state.Rinv_diag = np.diag(state.Rinv).copy()
        state.Rinv_rowsum = state.Rinv.sum(axis=1)
        state.r = state.Rinv.dot(state.eta)

    def quad(self, state):
        return state.eta.dot(state.r)

    def ones_quad(self, state):
        return state.Rinv_rowsum.sum()

    def ones_dot(self, state):
        return state.r.sum()

    def update(self, state, rng):
        z = rng.standard_normal(self.m)
        log_u = np.log(rng.uniform(size=self.m))
        accept = np.zeros(self.m, dtype=bool)
        precision_scale = 1.0 / state.scale ** 2
        y = self.y

        for j in range(self.m):
            idx = self.units[j]
            current = state.eta[j]
            q_jj = state.Rinv_diag[j] * precision_scale
            mean = current - state.r[j] / state.Rinv_diag[j]

            delta = state.re_steps[j] * z[j]
            proposal = current + delta

            lin_new = state.lin[idx] + delta
            ll_new = bernoulli_logit_loglik(y[idx], lin_new)
            log_ratio = (ll_new.sum() - state.ll[idx].sum()
                         - 0.5 * q_jj * ((proposal - mean) ** 2 - (current - mean) ** 2))

            if log_u[j] < log_ratio:
                accept[j] = True
                state.eta[j] = proposal
                state.lin[idx] = lin_new
                state.ll[idx] = ll_new
                state.r += delta * state.Rinv[:, j]

        state.ll_sum = state.ll.sum()
        return accept

    def on_rescale(self, state, factor):
        state.r = state.r * factor

    def on_shift(self, state, shift):
        state.r = state.r - shift * state.Rinv_rowsum

    def update_decay(self, state, rng):
        """Random-walk step on log(decay); returns True when accepted."""
        priors = self.spec.priors
        log_decay = math.log(state.decay)
        proposal = log_decay + state.decay_step * rng.standard_normal()
        decay = math.exp(proposal)

        try:
            factor, logdet = correlation_factor(self.spec, decay)
        except SingularCovarianceError:
            return False

        white = solve_triangular(factor[0], state.eta, lower=True)
        quad_new = white.dot(white)
        phi2 = state.scale ** 2

        log_ratio = (-0.5 * (logdet - state.logdet) - 0.5 * (quad_new - self.quad(state)) / phi2
                     + folded_normal_logpdf(decay, priors.decay_prior_mean, priors.decay_prior_sd)
                     - folded_normal_logpdf(state.decay, priors.decay_prior_mean, priors.decay_prior_sd)
                     + proposal - log_decay)

        if math.log(rng.uniform()) < log_ratio:
            state.decay = decay
            self.set_factor(state, factor, logdet)
            return True
        return False


TYPE_MAP = {
    NO_RANDOM_EFFECT: NoRandomEffect,
    IID: IidRandomEffect,
    SPATIAL: SpatialRandomEffect,
}
