# -*- coding: utf-8 -*-
"""
    Adaptive Metropolis-within-Gibbs for the logistic mixed model.

    One iteration updates, in order: the fixed effects (multivariate random
    walk), the cluster effects (block from ``types.TYPE_MAP``), an exact
    Gibbs draw along the intercept/effects translation, the effect scale
    (random walk on its log plus a joint rescale of scale and effects) and,
    for spatial effects, the log decay. Proposal scales adapt in batches
    during warmup only.
"""

import math
import logging

import numpy as np

from .constants import (NO_RANDOM_EFFECT, SPATIAL, RANDOM_EFFECT_KINDS, ADAPT_BATCH, ADAPT_RATE,
                        TARGET_ACCEPT_FIXED, TARGET_ACCEPT_SCALAR, FIXED_INNER_STEPS, MIN_SCALE, MAX_SCALE,
                        RHAT_THRESHOLD)
from .convergence import rhat
from .models import PosteriorSample
from .posterior import bernoulli_logit_loglik, fixed_effect_mode, proposal_factor
from .types import TYPE_MAP
from ..core import half_cauchy_logpdf, normal_logpdf
from ..errors import SamplerError, ValidationError, raise_with_context
from ..utils import make_rng, parallel_map

log = logging.getLogger(__name__)


class _ChainState(object):
    """Mutable state of one chain."""

    def __init__(self, beta, eta, scale, decay):
        self.beta = beta
        self.eta = eta
        self.scale = scale
        self.decay = decay
        self.lin = None
        self.ll = None
        self.ll_sum = None
        self.re_steps = None
        self.fixed_step = None
        self.scale_step = 0.5
        self.rescale_step = 0.2
        self.decay_step = 0.3


def _adapt(step, rate, target):
    return float(np.clip(step * np.exp(ADAPT_RATE * (rate - target)), MIN_SCALE, MAX_SCALE))


class _Chain(object):
    def __init__(self, spec, chain, seed):
        self.spec = spec
        self.chain = chain
        self.rng = make_rng(seed, chain)
        self.block = TYPE_MAP[spec.re_kind](spec)
        self.has_re = spec.re_kind != NO_RANDOM_EFFECT
        self.intercept = spec.intercept_index
        self.fixed_sd = spec.fixed_sd
        self.accepted = dict((name, 0.0) for name in ('fixed', 're', 'scale', 'rescale', 'decay'))
        self.proposed = dict(self.accepted)

    def initialise(self):
        spec, rng = self.spec, self.rng
        q = spec.n_fixed

        mode, H = fixed_effect_mode(spec)
        self.factor = proposal_factor(H)
        beta = mode + self.factor.dot(rng.standard_normal(q))

        eta = scale = decay = None
        if self.has_re:
            eta = np.zeros(spec.n_clusters)
            if spec.priors.re_scale_fixed is not None:
                scale = spec.priors.re_scale_fixed
            else:
                scale = 0.5 * spec.priors.re_scale_prior * math.exp(0.3 * rng.standard_normal())
            if spec.re_kind == SPATIAL:
                decay = spec.re_correlation.decay * math.exp(0.3 * rng.standard_normal())

        state = _ChainState(beta, eta, scale, decay)
        state.lin = spec.design.dot(beta)
        state.ll = bernoulli_logit_loglik(spec.response, state.lin)
        state.ll_sum = state.ll.sum()
        state.fixed_step = 2.38 / math.sqrt(q)

        if self.has_re:
            sizes = spec.cluster_map.cluster_sizes
            state.re_steps = 2.4 / np.sqrt(0.25 * sizes + 1.0 / scale ** 2)
            self.block.init_cache(state)
            self.re_accepted = np.zeros(spec.n_clusters)

        self.state = state
        return state

    # Blocks

    def update_fixed(self):
        state, spec, rng = self.state, self.spec, self.rng
        for _ in range(FIXED_INNER_STEPS):
            delta = state.fixed_step * self.factor.dot(rng.standard_normal(spec.n_fixed))
            proposal = state.beta + delta
            lin_new = state.lin + spec.design.dot(delta)
            ll_new = bernoulli_logit_loglik(spec.response, lin_new)
            ll_sum = ll_new.sum()

            log_ratio = (ll_sum - state.ll_sum
                         + np.sum(normal_logpdf(proposal, self.fixed_sd)) - np.sum(normal_logpdf(state.beta, self.fixed_sd)))
            self.proposed['fixed'] += 1
            if math.log(rng.uniform()) < log_ratio:
                self.accepted['fixed'] += 1
                state.beta, state.lin, state.ll, state.ll_sum = proposal, lin_new, ll_new, ll_sum

    def update_effects(self):
        accept = self.block.update(self.state, self.rng)
        self.re_accepted += accept
        self.proposed['re'] += accept.size
        self.accepted['re'] += accept.sum()

    def shift_intercept(self):
        """Exact draw of c in (beta_0 + c, eta - c), which leaves the likelihood unchanged."""
        state = self.state
        i0 = self.intercept
        sd2 = self.fixed_sd[i0] ** 2
        phi2 = state.scale ** 2

        precision = 1.0 / sd2 + self.block.ones_quad(state) / phi2
        centre = (-state.beta[i0] / sd2 + self.block.ones_dot(state) / phi2) / precision
        shift = centre + self.rng.standard_normal() / math.sqrt(precision)

        state.beta = state.beta.copy()
        state.beta[i0] += shift
        state.eta = state.eta - shift
        self.block.on_shift(state, shift)

    def update_scale(self):
        state, rng = self.state, self.rng
        prior_scale = self.spec.priors.re_scale_prior
        current = math.log(state.scale)
        proposal = current + state.scale_step * rng.standard_normal()

        log_ratio = (self.block.scale_log_density(state, proposal) - self.block.scale_log_density(state, current)
                     + half_cauchy_logpdf(math.exp(proposal), prior_scale) - half_cauchy_logpdf(state.scale, prior_scale)
                     + proposal - current)
        self.proposed['scale'] += 1
        if math.log(rng.uniform()) < log_ratio:
            self.accepted['scale'] += 1
            state.scale = math.exp(proposal)

    def rescale_effects(self):
        """Joint move (scale, eta) -> (scale e^s, eta e^s); the effect prior ratio cancels the Jacobian."""
        state, spec, rng = self.state, self.spec, self.rng
        prior_scale = spec.priors.re_scale_prior
        step = state.rescale_step * rng.standard_normal()
        factor = math.exp(step)

        eta_new = state.eta * factor
        lin_new = state.lin + spec.cluster_map.expand(eta_new - state.eta)
        ll_new = bernoulli_logit_loglik(spec.response, lin_new)
        ll_sum = ll_new.sum()

        log_ratio = (ll_sum - state.ll_sum
                     + half_cauchy_logpdf(state.scale * factor, prior_scale) - half_cauchy_logpdf(state.scale, prior_scale)
                     + step)
        self.proposed['rescale'] += 1
        if math.log(rng.uniform()) < log_ratio:
            self.accepted['rescale'] += 1
            state.eta, state.lin, state.ll, state.ll_sum = eta_new, lin_new, ll_new, ll_sum
            state.scale *= factor
            self.block.on_rescale(state, factor)

    def update_decay(self):
        self.proposed['decay'] += 1
        if self.block.update_decay(self.state, self.rng):
            self.accepted['decay'] += 1

    def check(self, block, iteration):
        if not np.isfinite(self.state.ll_sum):
            raise SamplerError('non-finite log likelihood after the {0} update in chain {1} at iteration {2}'.format(
                block, self.chain, iteration), chain=self.chain, iteration=iteration, block=block)

    def step(self, iteration):
        self.update_fixed()
        self.check('fixed', iteration)
        if not self.has_re:
            return

        self.update_effects()
        self.check('effects', iteration)
        if self.intercept is not None:
            self.shift_intercept()
        if self.spec.samples_scale:
            self.update_scale()
            self.rescale_effects()
            self.check('scale', iteration)
        if self.spec.re_kind == SPATIAL:
            self.update_decay()

    # Adaptation

    def reset_counts(self):
        for name in self.accepted:
            self.accepted[name] = 0.0
            self.proposed[name] = 0.0
        if self.has_re:
            self.re_accepted[:] = 0.0

    def rate(self, name):
        return self.accepted[name] / self.proposed[name] if self.proposed[name] else float('nan')

    def adapt(self, batch_iters):
        state = self.state
        state.fixed_step = _adapt(state.fixed_step, self.rate('fixed'), TARGET_ACCEPT_FIXED)
        if self.has_re:
            rates = self.re_accepted / batch_iters
            state.re_steps = np.clip(state.re_steps * np.exp(ADAPT_RATE * (rates - TARGET_ACCEPT_SCALAR)),
                                     MIN_SCALE, MAX_SCALE)
            if self.spec.samples_scale:
                state.scale_step = _adapt(state.scale_step, self.rate('scale'), TARGET_ACCEPT_SCALAR)
                state.rescale_step = _adapt(state.rescale_step, self.rate('rescale'), TARGET_ACCEPT_SCALAR)
            if self.spec.re_kind == SPATIAL:
                state.decay_step = _adapt(state.decay_step, self.rate('decay'), TARGET_ACCEPT_SCALAR)
        self.reset_counts()

    def refresh_fixed_proposal(self, history):
        """Replace the curvature-based proposal by the warmup draw covariance."""
        q = self.spec.n_fixed
        if len(history) < 2 * q + 2:
            return
        cov = np.atleast_2d(np.cov(np.asarray(history).T))
        ridge = 1e-10 * max(np.trace(cov) / q, 1e-12)
        try:
            factor = np.linalg.cholesky(cov + ridge * np.eye(q))
        except np.linalg.LinAlgError:
            return
        self.factor = factor
        self.state.fixed_step = 2.38 / math.sqrt(q)

    # Output

    def current(self):
        state = self.state
        values = [state.beta]
        if self.has_re:
            values.append(state.eta)
            if self.spec.samples_scale:
                values.append([state.scale])
            if self.spec.re_kind == SPATIAL:
                values.append([state.decay])
        return np.concatenate(values)


def run_chain(spec, chain, iters, warmup, seed):
    """
    Run one chain. Returns (post-warmup draws on the natural scale, info).
    """
    runner = _Chain(spec, chain, seed)
    runner.initialise()
    log.debug('Chain {0} starting: {1} iterations, {2} warmup, random effects {3}.'.format(
        chain, iters, warmup, RANDOM_EFFECT_KINDS[spec.re_kind]))

    draws = np.empty((iters - warmup, spec.dimension))
    history = []
    refresh_at = warmup // 2
    since_adapt = 0

    for t in range(iters):
        runner.step(t)
        since_adapt += 1

        if t < warmup:
            if t >= warmup // 4:
                history.append(runner.state.beta.copy())
            if since_adapt == ADAPT_BATCH or t == warmup - 1:
                runner.adapt(since_adapt)
                since_adapt = 0
            if t == refresh_at:
                runner.refresh_fixed_proposal(history)
            if t == warmup - 1:
                runner.reset_counts()
                log.debug('Chain {0} adapted: fixed step {1:.3g}.'.format(chain, runner.state.fixed_step))
            continue

        value = runner.current()
        if not np.all(np.isfinite(value)):
            raise SamplerError('non-finite parameter value in chain {0} at iteration {1}'.format(chain, t),
                               chain=chain, iteration=t, block='record')
        draws[t - warmup] = value

    info = dict(('accept_{0}'.format(name), runner.rate(name)) for name in runner.accepted if runner.proposed[name])
    log.debug('Chain {0} finished: {1}'.format(chain, info))
    return draws, info


@raise_with_context('chain {0[1]}')
def _chain_task(task):
    spec, chain, iters, warmup, seed = task
    return run_chain(spec, chain, iters, warmup, seed)


def sample(spec, chains=2, iters=1500, warmup=500, seed=0, workers=1, rhat_threshold=RHAT_THRESHOLD):
    """
    Draw from the posterior of ``spec``.

    Chain ``c`` uses the stream ``(seed, c)``; draws are assembled by chain
    index, so the result does not depend on ``workers``.
    """
    if not int(iters) > int(warmup) >= 1:
        raise ValidationError('need iters > warmup >= 1, got iters={0} warmup={1}'.format(iters, warmup))
    if int(chains) < 1:
        raise ValidationError('need at least one chain')

    tasks = [(spec, c, int(iters), int(warmup), int(seed)) for c in range(int(chains))]
    results = parallel_map(_chain_task, tasks, workers)

    per_chain = iters - warmup
    draws = np.vstack([r[0] for r in results])
    chain_id = np.repeat(np.arange(chains), per_chain)
    iteration = np.tile(np.arange(warmup, iters), chains)
    info = {'acceptance': [r[1] for r in results]}

    posterior = PosteriorSample(draws, spec.parameter_names, chain_id, warmup, iteration=iteration, info=info)
    report = rhat(posterior, threshold=rhat_threshold)

    if report.passed:
        log.info('Sampling converged: max R-hat {0:.4f} over {1} parameters.'.format(report.max_rhat, len(report.names)))
    else:
        log.warning('Sampling did not pass the R-hat gate ({0}); failing: {1}'.format(
            rhat_threshold, ', '.join(report.failing[:10])))
    return posterior, report


def posterior_point(sample, names=None, statistic='mean'):
    """Posterior mean (or median) of the named parameters as a dict."""
    names = sample.names if names is None else list(names)
    values = sample.columns(names)
    if statistic == 'mean':
        point = values.mean(axis=0)
    elif statistic == 'median':
        point = np.median(values, axis=0)
    else:
        raise ValidationError('unknown statistic {0!r}'.format(statistic))
    return dict(zip(names, point.tolist()))
