# -*- coding: utf-8 -*-

import logging

import numpy as np
import pandas as pd

from .constants import (NO_RANDOM_EFFECT, IID, SPATIAL, RANDOM_EFFECT_KINDS, RE_NAME, RE_SCALE_NAME,
                        DECAY_NAME, RHAT_THRESHOLD, DEFAULT_CHAINS, DEFAULT_ITERS, DEFAULT_WARMUP)
from ..core import CorrelationModel, PriorSpec, INDEPENDENT, EXPONENTIAL, folded_normal_decay_prior, pairwise_distances
from ..errors import ValidationError

log = logging.getLogger(__name__)


class LogisticMixedSpec(object):
    """
    Bernoulli-logit model with fixed effects ``design`` and, when a
    ``cluster_map`` is given, one random intercept per cluster that is either
    iid or spatially correlated through ``re_correlation``.
    """

    def __init__(self, design, names, response, cluster_map=None, re_correlation=None, priors=None,
                 centroids=None):
        design = np.asarray(design, dtype=float)
        if design.ndim != 2 or design.shape[1] < 1:
            raise ValidationError('design must be an N x q matrix with q >= 1')
        names = list(names)
        if len(names) != design.shape[1]:
            raise ValidationError('expected {0} column names, got {1}'.format(design.shape[1], len(names)))

        response = np.asarray(response, dtype=float)
        if response.shape != (design.shape[0],):
            raise ValidationError('response must have one value per design row')
        if not np.all(np.isin(response, (0.0, 1.0))):
            raise ValidationError('response must be binary')

        if re_correlation is None:
            re_correlation = CorrelationModel(INDEPENDENT)
        if priors is None:
            priors = PriorSpec()

        pinned = priors.pinned(names)
        if pinned:
            if len(pinned) == len(names):
                raise ValidationError('every fixed effect has a point-mass prior at zero')
            keep = [k for k, name in enumerate(names) if name not in pinned]
            design = design[:, keep]
            names = [names[k] for k in keep]
            log.info('Fixing {0} at zero.'.format(', '.join(pinned)))

        if cluster_map is not None and cluster_map.n_units != design.shape[0]:
            raise ValidationError('cluster map covers {0} units, design has {1}'.format(cluster_map.n_units, design.shape[0]))

        self.design = design
        self.names = names
        self.pinned = pinned
        self.fixed_sd = np.array([priors.coefficient_sd(name) for name in names])
        self.response = response
        self.cluster_map = cluster_map
        self.re_correlation = re_correlation
        self.distances = None

        if cluster_map is not None and re_correlation.kind == EXPONENTIAL:
            if centroids is None:
                raise ValidationError('spatial random effects require centroids')
            centroids = np.asarray(centroids, dtype=float)
            if centroids.shape != (cluster_map.n_clusters, 2):
                raise ValidationError('centroids must have one row per cluster')
            self.distances = pairwise_distances(centroids)
            if not priors.has_decay_prior:
                dmax = self.distances.max()
                if dmax <= 0:
                    raise ValidationError('all centroids coincide; supply a decay prior explicitly')
                priors = priors.replace(**folded_normal_decay_prior(dmax))

        self.centroids = centroids
        self.priors = priors

    def __repr__(self):
        return '<LogisticMixedSpec q={0} re={1}>'.format(self.n_fixed, RANDOM_EFFECT_KINDS[self.re_kind])

    @property
    def n_units(self):
        return self.design.shape[0]

    @property
    def n_fixed(self):
        return self.design.shape[1]

    @property
    def re_kind(self):
        if self.cluster_map is None:
            return NO_RANDOM_EFFECT
        if self.re_correlation.kind == EXPONENTIAL:
            return SPATIAL
        return IID

    @property
    def n_clusters(self):
        return 0 if self.cluster_map is None else self.cluster_map.n_clusters

    @property
    def samples_scale(self):
        return self.re_kind != NO_RANDOM_EFFECT and self.priors.re_scale_fixed is None

    @property
    def intercept_index(self):
        """Index of an all-ones design column, or None."""
        for k in range(self.n_fixed):
            if np.all(self.design[:, k] == 1.0):
                return k
        return None

    @property
    def parameter_names(self):
        """Labels of the natural-scale parameters stored in a PosteriorSample."""
        names = list(self.names)
        if self.re_kind != NO_RANDOM_EFFECT:
            names.extend(RE_NAME.format(j + 1) for j in range(self.n_clusters))
            if self.samples_scale:
                names.append(RE_SCALE_NAME)
            if self.re_kind == SPATIAL:
                names.append(DECAY_NAME)
        return names

    @property
    def dimension(self):
        return len(self.parameter_names)

    def split(self, theta):
        """
        Unpack an unconstrained vector into (beta, eta, log_scale, log_decay);
        absent blocks come back as None.
        """
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.dimension,):
            raise ValidationError('theta has length {0}, expected {1}'.format(theta.size, self.dimension))

        q, m = self.n_fixed, self.n_clusters
        beta = theta[:q]
        eta = log_scale = log_decay = None
        pos = q
        if self.re_kind != NO_RANDOM_EFFECT:
            eta = theta[pos:pos + m]
            pos += m
            if self.samples_scale:
                log_scale = theta[pos]
                pos += 1
            if self.re_kind == SPATIAL:
                log_decay = theta[pos]
        return beta, eta, log_scale, log_decay

    def to_natural(self, theta):
        theta = np.array(theta, dtype=float)
        beta, eta, log_scale, log_decay = self.split(theta)
        pos = self.n_fixed + self.n_clusters
        if log_scale is not None:
            theta[pos] = np.exp(log_scale)
            pos += 1
        if log_decay is not None:
            theta[pos] = np.exp(log_decay)
        return theta


class McmcSettings(object):
    """Budget and gate for one model fit."""

    def __init__(self, chains=DEFAULT_CHAINS, iters=DEFAULT_ITERS, warmup=DEFAULT_WARMUP, seed=0, workers=1,
                 rhat_threshold=RHAT_THRESHOLD, enforce_gate=True):
        if int(chains) < 1:
            raise ValidationError('need at least one chain')
        if not int(iters) > int(warmup) >= 1:
            raise ValidationError('need iters > warmup >= 1, got iters={0} warmup={1}'.format(iters, warmup))

        self.chains = int(chains)
        self.iters = int(iters)
        self.warmup = int(warmup)
        self.seed = int(seed)
        self.workers = int(workers)
        self.rhat_threshold = float(rhat_threshold)
        self.enforce_gate = bool(enforce_gate)

    def __repr__(self):
        return '<McmcSettings chains={0} iters={1} warmup={2} seed={3}>'.format(
            self.chains, self.iters, self.warmup, self.seed)

    def as_dict(self):
        return {
            'chains': self.chains,
            'iters': self.iters,
            'warmup': self.warmup,
            'seed': self.seed,
            'rhat_threshold': self.rhat_threshold,
            'enforce_gate': self.enforce_gate,
        }

    def replace(self, **changes):
        values = self.as_dict()
        values['workers'] = self.workers
        values.update(changes)
        return McmcSettings(**values)


class PosteriorSample(object):
    """
    Post-warmup draws stacked chain by chain: ``draws`` is L x d, ``chain_id``
    and ``iteration`` label each row.
    """

    def __init__(self, draws, names, chain_id, warmup_dropped, iteration=None, info=None):
        draws = np.asarray(draws, dtype=float)
        chain_id = np.asarray(chain_id, dtype=int)

        if draws.ndim != 2 or draws.shape[0] < 1:
            raise ValidationError('need at least one draw')
        if draws.shape[1] != len(names):
            raise ValidationError('draws have {0} columns for {1} names'.format(draws.shape[1], len(names)))
        if len(set(names)) != len(names):
            raise ValidationError('parameter names must be unique')
        if chain_id.shape != (draws.shape[0],):
            raise ValidationError('chain_id must label every draw')

        counts = np.bincount(chain_id)
        counts = counts[counts > 0]
        if len(set(counts.tolist())) != 1:
            raise ValidationError('chains must have equal length')

        if iteration is None:
            iteration = np.concatenate([np.arange(c) for c in counts]) + warmup_dropped

        self.draws = draws
        self.names = list(names)
        self.chain_id = chain_id
        self.warmup_dropped = int(warmup_dropped)
        self.iteration = np.asarray(iteration, dtype=int)
        self.info = info if info is not None else {}
        self._index = dict((name, k) for k, name in enumerate(self.names))

    def __repr__(self):
        return '<PosteriorSample draws={0} params={1} chains={2}>'.format(
            self.n_draws, len(self.names), self.n_chains)

    @property
    def n_draws(self):
        return self.draws.shape[0]

    @property
    def n_chains(self):
        return len(np.unique(self.chain_id))

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise ValidationError('unknown parameter {0!r}'.format(name))

    def column(self, name):
        return self.draws[:, self.index(name)]

    def columns(self, names):
        return self.draws[:, [self.index(name) for name in names]]

    def by_chain(self, names=None):
        """Array of shape (chains, draws per chain, parameters)."""
        values = self.draws if names is None else self.columns(names)
        chains = np.unique(self.chain_id)
        return np.stack([values[self.chain_id == c] for c in chains])

    def has(self, name):
        return name in self._index

    def to_frame(self):
        """Draws as a table with ``chain`` and ``iter`` leading the parameter columns."""
        frame = pd.DataFrame(self.draws, columns=self.names)
        frame.insert(0, 'iter', self.iteration)
        frame.insert(0, 'chain', self.chain_id)
        return frame


class ConvergenceReport(object):
    def __init__(self, names, rhat, ess, threshold=RHAT_THRESHOLD):
        self.names = list(names)
        self.rhat = np.asarray(rhat, dtype=float)
        self.ess = np.asarray(ess, dtype=float)
        self.threshold = float(threshold)

    def __repr__(self):
        return '<ConvergenceReport passed={0} max_rhat={1}>'.format(self.passed, self.max_rhat)

    @property
    def passed(self):
        return bool(self.rhat.size > 0 and np.all(np.isfinite(self.rhat)) and np.all(self.rhat < self.threshold))

    @property
    def max_rhat(self):
        if self.rhat.size == 0 or np.any(np.isnan(self.rhat)):
            return float('nan')
        return float(self.rhat.max())

    @property
    def failing(self):
        return [name for name, value in zip(self.names, self.rhat) if not value < self.threshold]

    def rhat_of(self, name):
        return float(self.rhat[self.names.index(name)])

    def ess_of(self, name):
        return float(self.ess[self.names.index(name)])

    def as_dict(self):
        return {
            'passed': self.passed,
            'threshold': self.threshold,
            'max_rhat': self.max_rhat,
            'min_ess': float(np.nanmin(self.ess)) if self.ess.size and not np.all(np.isnan(self.ess)) else None,
            'failing': self.failing,
        }
