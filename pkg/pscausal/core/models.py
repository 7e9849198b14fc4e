# -*- coding: utf-8 -*-

import numpy as np

from scipy import sparse

from .constants import (INDEPENDENT, EXPONENTIAL, CORRELATION_KINDS, DEFAULT_JITTER,
                        DEFAULT_FIXED_EFFECT_SD, DEFAULT_RE_SCALE_PRIOR)
from .spatial import exponential_correlation, max_pairwise_distance
from ..errors import ValidationError


def _frozen(values, dtype=float):
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


class ClusterMap(object):
    """
    Unit-to-cluster incidence. ``index`` holds 0-based cluster positions;
    ``labels`` the original identifiers in relabeled order.
    """

    def __init__(self, index, labels):
        self.index = _frozen(index, dtype=np.intp)
        self.labels = _frozen(labels, dtype=np.asarray(labels).dtype)
        self.cluster_sizes = _frozen(np.bincount(self.index, minlength=len(self.labels)), dtype=np.intp)
        self._assignment = None

        if np.any(self.cluster_sizes == 0):
            raise ValidationError('every cluster needs at least one unit')

    def __repr__(self):
        return '<ClusterMap N={0} m={1}>'.format(self.n_units, self.n_clusters)

    @property
    def n_units(self):
        return len(self.index)

    @property
    def n_clusters(self):
        return len(self.labels)

    @property
    def cluster_id(self):
        """Relabeled ids 1..m."""
        return self.index + 1

    @property
    def assignment(self):
        """Sparse N x m incidence matrix A."""
        if self._assignment is None:
            n = self.n_units
            self._assignment = sparse.csr_matrix(
                (np.ones(n), (np.arange(n), self.index)), shape=(n, self.n_clusters))
        return self._assignment

    def dense(self):
        return self.assignment.toarray()

    def expand(self, values):
        """A @ values; a trailing cluster axis is mapped to units."""
        return np.asarray(values)[..., self.index]

    def collapse(self, values):
        """A.T @ values for a unit vector."""
        return np.bincount(self.index, weights=np.asarray(values, dtype=float), minlength=self.n_clusters)

    def unit_slices(self):
        """Unit order grouped by cluster and the matching slice per cluster."""
        order = np.argsort(self.index, kind='stable')
        offsets = np.concatenate([[0], np.cumsum(self.cluster_sizes)])
        return order, [slice(offsets[j], offsets[j + 1]) for j in range(self.n_clusters)]


def build_cluster_map(cluster_id):
    """
    Relabel arbitrary cluster identifiers to 1..m.

    Labels are numbered in sorted identifier order, which keeps the map
    unchanged under any permutation of the units.
    """
    ids = np.asarray(cluster_id)
    if ids.size == 0:
        raise ValidationError('cluster ids are empty')
    if ids.ndim != 1:
        raise ValidationError('cluster ids must be a vector')

    labels, index = np.unique(ids, return_inverse=True)
    return ClusterMap(index.ravel(), labels)


class CorrelationModel(object):
    def __init__(self, kind=INDEPENDENT, decay=None):
        if kind not in CORRELATION_KINDS:
            raise ValidationError('unknown correlation kind {0!r}'.format(kind))
        if kind == EXPONENTIAL:
            if decay is None or not np.isfinite(decay) or decay <= 0:
                raise ValidationError('exponential correlation needs a positive decay, got {0}'.format(decay))
            decay = float(decay)

        self.kind = kind
        self.decay = decay if kind == EXPONENTIAL else None

    def __repr__(self):
        return '<CorrelationModel {0} decay={1}>'.format(CORRELATION_KINDS[self.kind], self.decay)

    @property
    def name(self):
        return CORRELATION_KINDS[self.kind]

    def matrix(self, n_clusters, centroids=None, decay=None):
        if self.kind == INDEPENDENT:
            return np.eye(n_clusters)
        if centroids is None:
            raise ValidationError('exponential correlation requires centroids')
        return exponential_correlation(centroids, self.decay if decay is None else decay)


class PriorSpec(object):
    """
    Prior scales. ``re_scale_fixed`` pins the random-effect scale to a known
    value instead of giving it the Half-Cauchy prior.

    ``coefficient_priors`` maps fixed-effect names to their own normal sd in
    place of ``fixed_effect_sd``; an sd of 0 is a point mass at zero.
    """

    FIELDS = ('fixed_effect_sd', 're_scale_prior', 'decay_prior_mean', 'decay_prior_sd',
              're_scale_fixed', 'jitter', 'coefficient_priors')

    def __init__(self, fixed_effect_sd=DEFAULT_FIXED_EFFECT_SD, re_scale_prior=DEFAULT_RE_SCALE_PRIOR,
                 decay_prior_mean=None, decay_prior_sd=None, re_scale_fixed=None, jitter=DEFAULT_JITTER,
                 coefficient_priors=None):
        for name, value in (('fixed_effect_sd', fixed_effect_sd), ('re_scale_prior', re_scale_prior),
                            ('decay_prior_mean', decay_prior_mean), ('decay_prior_sd', decay_prior_sd),
                            ('re_scale_fixed', re_scale_fixed)):
            if value is not None and (not np.isfinite(value) or value <= 0):
                raise ValidationError('{0} must be strictly positive, got {1}'.format(name, value))
        if jitter < 0:
            raise ValidationError('jitter must be non-negative')

        coefficient_priors = dict(coefficient_priors or {})
        for name, sd in coefficient_priors.items():
            if sd is None or not np.isfinite(sd) or sd < 0:
                raise ValidationError('prior sd of {0} must be non-negative, got {1}'.format(name, sd))

        self.fixed_effect_sd = float(fixed_effect_sd)
        self.re_scale_prior = float(re_scale_prior)
        self.decay_prior_mean = None if decay_prior_mean is None else float(decay_prior_mean)
        self.decay_prior_sd = None if decay_prior_sd is None else float(decay_prior_sd)
        self.re_scale_fixed = None if re_scale_fixed is None else float(re_scale_fixed)
        self.jitter = float(jitter)
        self.coefficient_priors = dict((str(name), float(sd)) for name, sd in coefficient_priors.items())

    def __repr__(self):
        return '<PriorSpec {0}>'.format(self.as_dict())

    def as_dict(self):
        values = dict((name, getattr(self, name)) for name in self.FIELDS)
        values['coefficient_priors'] = dict(self.coefficient_priors)
        return values

    def replace(self, **changes):
        values = self.as_dict()
        values.update(changes)
        return PriorSpec(**values)

    def coefficient_sd(self, name):
        return self.coefficient_priors.get(name, self.fixed_effect_sd)

    def pinned(self, names):
        """Names among ``names`` whose prior is a point mass at zero."""
        return [name for name in names if self.coefficient_sd(name) == 0.0]

    @property
    def has_decay_prior(self):
        return self.decay_prior_mean is not None and self.decay_prior_sd is not None


class Dataset(object):
    """
    Cluster-indexed observations.

    ``cluster_id`` may carry any identifiers; they are relabeled to 1..m and
    the originals kept in ``cluster_map.labels``. ``centroids`` rows follow
    the relabeled order. The exposure is binary unless
    ``continuous_exposure`` is set (linear Gaussian designs).
    """

    def __init__(self, outcome, exposure, covariates, cluster_id, covariate_names=None,
                 centroids=None, binary_covariates=None, extras=None, continuous_exposure=False):
        exposure = np.asarray(exposure)
        n = exposure.shape[0]

        if covariates is None:
            covariates = np.zeros((n, 0))
        covariates = np.asarray(covariates, dtype=float)
        if covariates.ndim == 1:
            covariates = covariates[:, None]

        if covariate_names is None:
            covariate_names = ['X{0}'.format(k + 1) for k in range(covariates.shape[1])]
        covariate_names = list(covariate_names)

        outcome = np.asarray(outcome, dtype=float)
        cluster_id = np.asarray(cluster_id)

        lengths = set([outcome.shape[0], n, covariates.shape[0], cluster_id.shape[0]])
        if len(lengths) != 1:
            raise ValidationError('outcome, exposure, covariates and cluster ids must share length N')
        if len(covariate_names) != covariates.shape[1]:
            raise ValidationError('expected {0} covariate names, got {1}'.format(covariates.shape[1], len(covariate_names)))
        if len(set(covariate_names)) != len(covariate_names):
            raise ValidationError('covariate names must be unique')
        if not continuous_exposure and not np.all(np.isin(exposure, (0, 1))):
            raise ValidationError('exposure must be binary')

        self.cluster_map = build_cluster_map(cluster_id)
        self.outcome = _frozen(outcome)
        self.exposure = _frozen(exposure, dtype=float)
        self.covariates = _frozen(covariates)
        self.covariate_names = tuple(covariate_names)
        self.continuous_exposure = bool(continuous_exposure)
        self.extras = extras if extras is not None else {}

        if binary_covariates is None:
            binary_covariates = [name for k, name in enumerate(covariate_names)
                                 if np.all(np.isin(covariates[:, k], (0.0, 1.0)))]
        self.binary_covariates = frozenset(binary_covariates)

        self.centroids = None
        if centroids is not None:
            centroids = np.asarray(centroids, dtype=float)
            if centroids.shape != (self.n_clusters, 2):
                raise ValidationError('centroids must have exactly {0} rows of (x, y)'.format(self.n_clusters))
            if not np.all(np.isfinite(centroids)):
                raise ValidationError('centroids contain non-finite coordinates')
            self.centroids = _frozen(centroids)

    def __repr__(self):
        return '<Dataset N={0} m={1} p={2}>'.format(self.n_units, self.n_clusters, len(self.covariate_names))

    @property
    def n_units(self):
        return self.cluster_map.n_units

    @property
    def n_clusters(self):
        return self.cluster_map.n_clusters

    @property
    def cluster_id(self):
        return self.cluster_map.cluster_id

    @property
    def cluster_labels(self):
        return self.cluster_map.labels

    @property
    def raw_cluster_ids(self):
        return self.cluster_labels[self.cluster_map.index]

    @property
    def max_distance(self):
        if self.centroids is None:
            return None
        return max_pairwise_distance(self.centroids)

    def covariate(self, name):
        try:
            return self.covariates[:, self.covariate_names.index(name)]
        except ValueError:
            raise ValidationError('unknown covariate {0!r}'.format(name))

    def _rebuild(self, **changes):
        values = {
            'outcome': self.outcome,
            'exposure': self.exposure,
            'covariates': self.covariates,
            'cluster_id': self.raw_cluster_ids,
            'covariate_names': self.covariate_names,
            'centroids': self.centroids,
            'binary_covariates': self.binary_covariates,
            'extras': self.extras,
            'continuous_exposure': self.continuous_exposure,
        }
        values.update(changes)
        return Dataset(**values)

    def with_centroids(self, centroids):
        return self._rebuild(centroids=centroids)

    def with_outcome(self, outcome):
        return self._rebuild(outcome=outcome)

    def with_covariates(self, covariates, covariate_names, binary_covariates=None):
        return self._rebuild(covariates=covariates, covariate_names=covariate_names,
                             binary_covariates=binary_covariates)

    def select_covariates(self, names):
        names = list(names)
        idx = [self.covariate_names.index(name) for name in names]
        return self._rebuild(covariates=self.covariates[:, idx], covariate_names=names,
                             binary_covariates=[name for name in names if name in self.binary_covariates])

    def subset(self, mask):
        """Rows where ``mask`` holds; clusters left empty are dropped."""
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (self.n_units,):
            raise ValidationError('mask must have length N')

        centroids = None
        if self.centroids is not None:
            centroids = self.centroids[np.unique(self.cluster_map.index[mask])]

        return self._rebuild(outcome=self.outcome[mask], exposure=self.exposure[mask],
                             covariates=self.covariates[mask], cluster_id=self.raw_cluster_ids[mask],
                             centroids=centroids)

    def permuted(self, order):
        """Same data with units reordered by ``order``."""
        order = np.asarray(order)
        return self._rebuild(outcome=self.outcome[order], exposure=self.exposure[order],
                             covariates=self.covariates[order], cluster_id=self.raw_cluster_ids[order])
