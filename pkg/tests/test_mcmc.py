# -*- coding: utf-8 -*-

import numpy as np
import pytest

from mock import patch
from scipy import stats
from scipy.special import expit

from pscausal.core import CorrelationModel, PriorSpec, EXPONENTIAL
from pscausal.errors import SamplerError, ValidationError
from pscausal.mcmc import (LogisticMixedSpec, McmcSettings, PosteriorSample, IID, SPATIAL, NO_RANDOM_EFFECT,
                           RE_SCALE_NAME, DECAY_NAME, log_posterior, log_posterior_terms, pointwise_loglik,
                           fixed_effect_mode, rhat, rhat_values, effective_sample_size, sample, posterior_point)
from pscausal.mcmc.convergence import _z_scale
from pscausal.utils import make_rng

from tests import TestCase, logistic_dataset


def _design(dataset):
    return np.column_stack([np.ones(dataset.n_units), dataset.exposure, dataset.covariates])


def _spec(dataset, re_kind=NO_RANDOM_EFFECT, priors=None):
    names = ['(Intercept)', 'Z', 'X1', 'X2']
    if re_kind == NO_RANDOM_EFFECT:
        return LogisticMixedSpec(_design(dataset), names, dataset.outcome, priors=priors)
    if re_kind == IID:
        return LogisticMixedSpec(_design(dataset), names, dataset.outcome, cluster_map=dataset.cluster_map,
                                 priors=priors)
    return LogisticMixedSpec(_design(dataset), names, dataset.outcome, cluster_map=dataset.cluster_map,
                             re_correlation=CorrelationModel(EXPONENTIAL, decay=0.5), priors=priors,
                             centroids=dataset.centroids)


class TestSpec(TestCase):

    def test_parameter_names(self):
        dataset = logistic_dataset(m=5, n=4, centroids=True)

        assert _spec(dataset).parameter_names == ['(Intercept)', 'Z', 'X1', 'X2']
        iid = _spec(dataset, IID)
        assert iid.re_kind == IID
        assert iid.parameter_names[4:] == ['eta[1]', 'eta[2]', 'eta[3]', 'eta[4]', 'eta[5]', RE_SCALE_NAME]
        spatial = _spec(dataset, SPATIAL)
        assert spatial.re_kind == SPATIAL
        assert spatial.parameter_names[-1] == DECAY_NAME
        assert spatial.priors.has_decay_prior

    def test_fixed_scale_drops_scale_parameter(self):
        dataset = logistic_dataset(m=5, n=4)
        spec = _spec(dataset, IID, priors=PriorSpec(re_scale_fixed=0.3))

        assert RE_SCALE_NAME not in spec.parameter_names
        assert spec.dimension == 4 + 5

    def test_point_mass_prior_drops_column(self):
        dataset = logistic_dataset(m=5, n=4)
        priors = PriorSpec(fixed_effect_sd=5.0, coefficient_priors={'X2': 0.0, 'Z': 2.0})
        spec = _spec(dataset, priors=priors)

        assert spec.names == ['(Intercept)', 'Z', 'X1']
        assert spec.pinned == ['X2']
        assert spec.design.shape == (20, 3)
        assert list(spec.fixed_sd) == [5.0, 2.0, 5.0]

        beta = np.array([0.3, -0.4, 1.1])
        expected = np.sum(stats.norm(scale=[5.0, 2.0, 5.0]).logpdf(beta))
        assert log_posterior_terms(spec, beta)['fixed_prior'] == pytest.approx(expected)

        with pytest.raises(ValidationError):
            _spec(dataset, priors=PriorSpec(coefficient_priors=dict.fromkeys(['(Intercept)', 'Z', 'X1', 'X2'], 0.0)))

    def test_spatial_needs_centroids(self):
        dataset = logistic_dataset(m=5, n=4)

        with pytest.raises(ValidationError):
            _spec(dataset, SPATIAL)

    def test_non_binary_response(self):
        with pytest.raises(ValidationError):
            LogisticMixedSpec(np.ones((3, 1)), ['a'], [0.0, 0.5, 1.0])


class TestLogPosterior(TestCase):

    def test_terms_sum_to_total(self):
        dataset = logistic_dataset(m=6, n=5)
        spec = _spec(dataset, IID)
        theta = make_rng(1).normal(scale=0.3, size=spec.dimension)
        terms = log_posterior_terms(spec, theta)

        assert set(terms) == set(['loglik', 'fixed_prior', 'scale_prior', 'scale_jacobian', 're_prior'])
        assert log_posterior(spec, theta) == pytest.approx(sum(terms.values()))

    def test_fixed_only_by_hand(self):
        dataset = logistic_dataset(m=4, n=5)
        spec = _spec(dataset)
        beta = np.array([0.1, -0.2, 0.3, 0.05])
        p = expit(_design(dataset).dot(beta))
        y = dataset.outcome
        expected = np.sum(y * np.log(p) + (1 - y) * np.log(1 - p))
        expected += np.sum(-0.5 * (beta / 10.0) ** 2 - np.log(10.0) - 0.5 * np.log(2 * np.pi))

        assert log_posterior(spec, beta) == pytest.approx(expected)

    def test_zero_coefficients_give_half_probabilities(self):
        dataset = logistic_dataset(m=4, n=5)
        terms = log_posterior_terms(_spec(dataset), np.zeros(4))

        assert terms['loglik'] == pytest.approx(dataset.n_units * np.log(0.5))

    def test_non_finite_theta_rejected(self):
        spec = _spec(logistic_dataset(m=4, n=5))

        with pytest.raises(ValidationError):
            log_posterior(spec, np.array([0.0, np.nan, 0.0, 0.0]))

    def test_mode_is_stationary(self):
        dataset = logistic_dataset(m=10, n=10)
        spec = _spec(dataset)
        mode, H = fixed_effect_mode(spec)
        X = _design(dataset)
        grad = X.T.dot(dataset.outcome - expit(X.dot(mode))) - mode / 100.0

        assert np.allclose(grad, 0.0, atol=1e-3)
        assert np.all(np.linalg.eigvalsh(H) > 0)


class TestConvergence(TestCase):

    def test_mixed_chains_pass(self):
        values = make_rng(4).standard_normal((4, 1000))

        assert rhat_values(values)[0] < 1.01

    def test_shifted_chain_fails(self):
        values = make_rng(4).standard_normal((2, 500))
        values[1] += 3.0

        assert rhat_values(values)[0] > 1.5

    def test_constant_chain_is_not_a_value(self):
        values = np.ones((2, 100))

        assert np.isnan(rhat_values(values)[0])

    def test_rank_normal_scores(self):
        values = np.array([3.0, 1.0, 4.0, 1.5, 9.0]).reshape(1, 5, 1)
        ranks = np.array([3.0, 1.0, 4.0, 2.0, 5.0])

        assert np.allclose(_z_scale(values).ravel(), stats.norm.ppf((ranks - 3.0 / 8.0) / (5 + 0.25)))

    def test_report_gate(self):
        rng = make_rng(6)
        draws = rng.standard_normal((400, 2))
        draws[200:, 1] += 5.0
        posterior = PosteriorSample(draws, ['a', 'b'], np.repeat([0, 1], 200), 100)
        report = rhat(posterior)

        assert not report.passed
        assert report.failing == ['b']
        assert rhat(posterior, names=['a']).passed

    def test_ess_of_independent_draws(self):
        draws = make_rng(8).standard_normal((2000, 1))
        posterior = PosteriorSample(draws, ['a'], np.repeat([0, 1], 1000), 0)
        ess = effective_sample_size(posterior)['a']

        assert 1400 < ess < 2800

    def test_ess_of_correlated_draws_is_smaller(self):
        rng = make_rng(9)
        chains = np.zeros((2, 1000))
        for c in range(2):
            for t in range(1, 1000):
                chains[c, t] = 0.9 * chains[c, t - 1] + rng.standard_normal()
        posterior = PosteriorSample(chains.reshape(-1, 1), ['a'], np.repeat([0, 1], 1000), 0)

        assert effective_sample_size(posterior)['a'] < 400


class TestSampler(TestCase):

    def test_fixed_effects_posterior_near_mode(self):
        dataset = logistic_dataset(m=20, n=15, seed=3)
        spec = _spec(dataset)
        posterior, report = sample(spec, chains=2, iters=1500, warmup=500, seed=12)
        mode, _ = fixed_effect_mode(spec)

        assert report.passed
        assert posterior.n_draws == 2000
        assert np.allclose(posterior.draws.mean(axis=0), mode, atol=0.15)

    def test_two_parameter_means_match_grid_oracle(self):
        rng = make_rng(21)
        x = rng.normal(size=200)
        y = (rng.uniform(size=200) < expit(1.0 - 1.0 * x)).astype(float)
        spec = LogisticMixedSpec(np.column_stack([np.ones(200), x]), ['(Intercept)', 'X'], y)
        posterior, report = sample(spec, chains=4, iters=5000, warmup=1000, seed=22)

        mode, H = fixed_effect_mode(spec)
        sd = np.sqrt(np.diag(np.linalg.inv(H)))
        b0 = np.linspace(mode[0] - 7 * sd[0], mode[0] + 7 * sd[0], 401)
        b1 = np.linspace(mode[1] - 7 * sd[1], mode[1] + 7 * sd[1], 451)
        logp = np.empty((b0.size, b1.size))
        for i, intercept in enumerate(b0):
            lin = intercept + b1[:, None] * x[None, :]
            logp[i] = np.sum(y * lin - np.logaddexp(0.0, lin), axis=1)
        logp += stats.norm(scale=10.0).logpdf(b0)[:, None] + stats.norm(scale=10.0).logpdf(b1)[None, :]
        weights = np.exp(logp - logp.max())
        weights /= weights.sum()
        oracle = np.array([np.sum(weights.sum(axis=1) * b0), np.sum(weights.sum(axis=0) * b1)])

        assert report.passed
        assert np.allclose(posterior.draws.mean(axis=0), oracle, rtol=0.02, atol=0)

    def test_seed_determinism_across_workers(self):
        spec = _spec(logistic_dataset(m=8, n=6), IID)

        serial, _ = sample(spec, chains=2, iters=120, warmup=40, seed=5, workers=1)
        again, _ = sample(spec, chains=2, iters=120, warmup=40, seed=5, workers=1)
        pooled, _ = sample(spec, chains=2, iters=120, warmup=40, seed=5, workers=2)

        assert np.array_equal(serial.draws, again.draws)
        assert np.array_equal(serial.draws, pooled.draws)

    def test_chains_differ(self):
        spec = _spec(logistic_dataset(m=8, n=6))
        posterior, _ = sample(spec, chains=2, iters=100, warmup=50, seed=1)

        assert not np.array_equal(posterior.draws[posterior.chain_id == 0], posterior.draws[posterior.chain_id == 1])

    def test_iid_effects_sampled(self):
        dataset = logistic_dataset(m=15, n=10, effect_sd=0.8)
        spec = _spec(dataset, IID)
        posterior, _ = sample(spec, chains=2, iters=600, warmup=200, seed=2)

        assert posterior.draws.shape == (800, spec.dimension)
        assert np.all(posterior.column(RE_SCALE_NAME) > 0)
        assert len(posterior.info['acceptance']) == 2
        assert np.all(np.isfinite(posterior.draws))

    def test_fixed_scale_shrinks_effects(self):
        dataset = logistic_dataset(m=10, n=10, effect_sd=1.0)
        names = ['eta[{0}]'.format(j + 1) for j in range(10)]

        spread = []
        for scale in (0.01, 0.3, 3.0):
            spec = _spec(dataset, IID, priors=PriorSpec(re_scale_fixed=scale))
            posterior, _ = sample(spec, chains=2, iters=600, warmup=200, seed=3)
            spread.append(np.sum(posterior.columns(names).mean(axis=0) ** 2))

        assert np.sqrt(spread[0] / 10) < 0.05
        assert spread[0] < spread[1] < spread[2]

    def test_spatial_effects_sampled(self):
        dataset = logistic_dataset(m=8, n=10, centroids=True)
        spec = _spec(dataset, SPATIAL)
        posterior, _ = sample(spec, chains=2, iters=300, warmup=100, seed=4)

        assert np.all(posterior.column(DECAY_NAME) > 0)
        assert np.all(np.isfinite(posterior.draws))

    def test_pointwise_loglik(self):
        dataset = logistic_dataset(m=6, n=5)
        spec = _spec(dataset)
        posterior, _ = sample(spec, chains=2, iters=80, warmup=40, seed=7)
        ll = pointwise_loglik(spec, posterior)

        assert ll.shape == (posterior.n_draws, dataset.n_units)
        assert ll[0].sum() == pytest.approx(log_posterior_terms(spec, posterior.draws[0])['loglik'])

    def test_non_finite_likelihood_reports_position(self):
        spec = _spec(logistic_dataset(m=4, n=5))

        def broken(y, lin):
            return np.full(np.shape(lin), np.nan)

        with patch('pscausal.mcmc.sampler.bernoulli_logit_loglik', side_effect=broken):
            with pytest.raises(SamplerError) as info:
                sample(spec, chains=1, iters=20, warmup=10, seed=0)

        assert info.value.chain == 0
        assert info.value.iteration == 0
        assert info.value.block == 'fixed'

    def test_budget_validated(self):
        spec = _spec(logistic_dataset(m=4, n=5))

        with pytest.raises(ValidationError):
            sample(spec, iters=10, warmup=10)
        with pytest.raises(ValidationError):
            McmcSettings(chains=0)

    def test_posterior_point(self):
        posterior = PosteriorSample(np.array([[1.0, 2.0], [3.0, 10.0], [5.0, 3.0]]), ['a', 'b'], [0, 0, 0], 0)

        assert posterior_point(posterior) == {'a': 3.0, 'b': 5.0}
        assert posterior_point(posterior, ['b'], statistic='median') == {'b': 3.0}
        with pytest.raises(ValidationError):
            posterior_point(posterior, statistic='mode')

    def test_draws_frame(self):
        posterior = PosteriorSample(np.arange(8.0).reshape(4, 2), ['a', 'b'], [0, 0, 1, 1], 10)
        frame = posterior.to_frame()

        assert list(frame.columns) == ['chain', 'iter', 'a', 'b']
        assert list(frame['iter']) == [10, 11, 10, 11]
