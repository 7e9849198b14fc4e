# -*- coding: utf-8 -*-

import numpy as np

from .constants import (PROPENSITY_MODELS, PROPENSITY_RANDOM_EFFECT, PROPENSITY_DESCRIPTIONS, ADJUSTMENTS,
                        ADJUST_PS, MODEL_REGISTRY, SEPARATION_EPS)
from ..mcmc.constants import RANDOM_EFFECT_KINDS, SPATIAL
from ..errors import ValidationError


def _summary(values):
    values = np.asarray(values, dtype=float)
    return {
        'mean': float(values.mean()),
        'sd': float(values.std(ddof=1)) if values.size > 1 else 0.0,
        'q025': float(np.percentile(values, 2.5)),
        'q975': float(np.percentile(values, 97.5)),
    }


class PropensityModelKind(object):
    def __init__(self, name):
        if name not in PROPENSITY_MODELS:
            raise ValidationError('unknown propensity model {0!r}; valid: {1}'.format(name, ', '.join(PROPENSITY_MODELS)))
        self.name = name

    def __repr__(self):
        return '<PropensityModelKind {0}>'.format(self.name)

    def __eq__(self, other):
        return isinstance(other, PropensityModelKind) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    @property
    def re_kind(self):
        return PROPENSITY_RANDOM_EFFECT[self.name]

    @property
    def requires_centroids(self):
        return self.re_kind == SPATIAL

    @property
    def description(self):
        return PROPENSITY_DESCRIPTIONS[self.name]


class PropensityEstimate(object):
    """
    Frozen plug-in propensity score. ``point_estimates`` holds the posterior
    means that produced it; ``convergence`` and ``fit`` describe the
    exposure-model fit.
    """

    def __init__(self, ps, kind, point_estimates=None, convergence=None, fit=None, ps_point=None):
        ps = np.array(ps, dtype=float, copy=True)
        if ps.ndim != 1:
            raise ValidationError('propensity scores must be a vector')
        if np.any(ps <= 0) or np.any(ps >= 1):
            raise ValidationError('propensity scores must lie strictly inside (0, 1)')
        ps.setflags(write=False)

        self.ps = ps
        self.kind = kind if isinstance(kind, PropensityModelKind) else PropensityModelKind(kind)
        self.point_estimates = point_estimates if point_estimates is not None else {}
        self.convergence = convergence
        self.fit = fit
        self.ps_point = ps_point

    def __repr__(self):
        return '<PropensityEstimate {0} N={1}>'.format(self.name, self.ps.size)

    @property
    def name(self):
        return self.kind.name

    def separated(self, eps=SEPARATION_EPS):
        return bool(np.any(self.ps < eps) or np.any(self.ps > 1.0 - eps))

    def as_dict(self):
        return {
            'model': self.name,
            'ps_point': self.ps_point,
            'point_estimates': dict(self.point_estimates),
            'convergence': None if self.convergence is None else self.convergence.as_dict(),
            'fit': None if self.fit is None else self.fit.as_dict(),
            'separated': self.separated(),
            'ps_summary': _summary(self.ps),
        }


class OutcomeModelKind(object):
    """
    Confounding adjustment (``none``, ``covariates`` or ``ps`` of a named
    propensity model) crossed with the outcome random effect.
    """

    def __init__(self, adjustment, random_effect, ps_kind=None, name=None):
        if adjustment not in ADJUSTMENTS:
            raise ValidationError('unknown adjustment {0!r}'.format(adjustment))
        if random_effect not in RANDOM_EFFECT_KINDS:
            raise ValidationError('unknown random effect {0!r}'.format(random_effect))
        if adjustment == ADJUST_PS:
            if ps_kind is None:
                raise ValidationError('propensity adjustment needs a propensity model')
            ps_kind = PropensityModelKind(ps_kind).name
        elif ps_kind is not None:
            raise ValidationError('a propensity model only applies to propensity adjustment')

        self.adjustment = adjustment
        self.random_effect = random_effect
        self.ps_kind = ps_kind
        self.name = name if name is not None else self._lookup()

    def __repr__(self):
        return '<OutcomeModelKind {0}>'.format(self.name)

    def _lookup(self):
        key = (self.adjustment, self.ps_kind, self.random_effect)
        for name in sorted(MODEL_REGISTRY):
            if MODEL_REGISTRY[name] == key and name.startswith('M') and not name.startswith('MD'):
                return name
        return '{0}/{1}'.format(self.ps_kind or self.adjustment, RANDOM_EFFECT_KINDS[self.random_effect])

    @classmethod
    def from_name(cls, name):
        try:
            adjustment, ps_kind, random_effect = MODEL_REGISTRY[name]
        except KeyError:
            raise ValidationError('unknown outcome model {0!r}; valid: {1}'.format(
                name, ', '.join(sorted(MODEL_REGISTRY, key=lambda k: (k.startswith('MD'), int(k.lstrip('MD')))))))
        return cls(adjustment, random_effect, ps_kind=ps_kind, name=name)

    @property
    def requires_ps(self):
        return self.adjustment == ADJUST_PS

    @property
    def requires_centroids(self):
        return self.random_effect == SPATIAL

    def as_dict(self):
        return {
            'model': self.name,
            'adjustment': self.adjustment,
            'ps_model': self.ps_kind,
            'random_effect': RANDOM_EFFECT_KINDS[self.random_effect],
        }


class AtePosterior(object):
    """Per-draw ATE and exposure odds ratio exp(beta_Z)."""

    def __init__(self, tau_draws, or_draws):
        self.tau_draws = np.asarray(tau_draws, dtype=float)
        self.or_draws = np.asarray(or_draws, dtype=float)
        if self.tau_draws.shape != self.or_draws.shape:
            raise ValidationError('ATE and OR draws must align')

    def __repr__(self):
        return '<AtePosterior ate={0:.4f} or={1:.4f}>'.format(self.ate_mean, self.or_mean)

    @property
    def ate_mean(self):
        return float(self.tau_draws.mean())

    @property
    def or_mean(self):
        return float(self.or_draws.mean())

    @property
    def tau_summary(self):
        return _summary(self.tau_draws)

    @property
    def or_summary(self):
        return _summary(self.or_draws)

    def interval(self, level=0.95):
        tail = 50.0 * (1.0 - level)
        return tuple(float(v) for v in np.percentile(self.tau_draws, [tail, 100.0 - tail]))

    def covers(self, value, level=0.95):
        low, high = self.interval(level)
        return low <= value <= high

    def as_dict(self):
        return {'ate': self.tau_summary, 'odds_ratio': self.or_summary}


class TwoStepReport(object):
    def __init__(self, outcome_kind, propensity, sample, convergence, ate, beta_z, smd=None, positivity=None,
                 fit=None, settings=None, priors=None):
        self.outcome_kind = outcome_kind
        self.propensity = propensity
        self.sample = sample
        self.convergence = convergence
        self.ate = ate
        self.beta_z = beta_z
        self.smd = smd
        self.positivity = positivity
        self.fit = fit
        self.settings = settings
        self.priors = priors

    def __repr__(self):
        return '<TwoStepReport {0} ate={1:.4f}>'.format(self.outcome_kind.name, self.ate.ate_mean)

    @property
    def seed(self):
        return None if self.settings is None else self.settings.seed

    def as_dict(self):
        return {
            'models': {
                'outcome': self.outcome_kind.as_dict(),
                'propensity': None if self.propensity is None else self.propensity.name,
            },
            'propensity': None if self.propensity is None else self.propensity.as_dict(),
            'ate': self.ate.tau_summary,
            'odds_ratio': self.ate.or_summary,
            'beta_Z': _summary(self.beta_z),
            'convergence': self.convergence.as_dict(),
            'smd': None if self.smd is None else self.smd.as_dict(),
            'positivity': None if self.positivity is None else self.positivity.as_dict(),
            'fit': None if self.fit is None else self.fit.as_dict(),
            'config': {
                'mcmc': None if self.settings is None else self.settings.as_dict(),
                'priors': None if self.priors is None else self.priors.as_dict(),
            },
            'seed': self.seed,
        }
