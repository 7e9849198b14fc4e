# -*- coding: utf-8 -*-

import numpy as np
import pytest

from pscausal.analytic import (MD1, MD2, MD3, MD4, LINEAR_MODELS, DENSE, WOODBURY, VARIANTS, LinearSimConfig,
                               BlockCovariance, generate_linear, balancing_score_fixed, balancing_score_mixed,
                               conditional_moments_Y, fit_linear_outcome, theoretical_bias_variance,
                               evaluate_linear_model, correlated_effects)
from pscausal.analytic.linalg import check_rank, ols_projector, gls_projector
from pscausal.core import Dataset, build_cluster_map
from pscausal.errors import RankDeficiencyError, SingularCovarianceError, ValidationError
from pscausal.utils import make_rng

from tests import TestCase


def _scores(dataset, cfg, method=WOODBURY):
    return {
        False: balancing_score_fixed(dataset),
        True: balancing_score_mixed(dataset, cfg.sigma_T, varrho=cfg.varrho, method=method)[0],
    }


class TestBlockCovariance(TestCase):

    def setUp(self):
        self.cmap = build_cluster_map(np.repeat(np.arange(4), [1, 2, 3, 4]))

    def test_woodbury_solve_matches_dense(self):
        v = make_rng(3).standard_normal((10, 2))
        fast = BlockCovariance(self.cmap, 1.3, 0.7, method=WOODBURY)
        exact = BlockCovariance(self.cmap, 1.3, 0.7, method=DENSE)

        assert np.allclose(fast.solve(v), exact.solve(v), atol=1e-10)
        assert np.allclose(fast.dense().dot(fast.solve(v)), v, atol=1e-10)
        assert np.allclose(fast.cluster_precision(), exact.cluster_precision(), atol=1e-10)

    def test_matvec_matches_dense(self):
        v = np.arange(10.0)
        cov = BlockCovariance(self.cmap, 0.5, 2.0)

        assert np.allclose(cov.matvec(v), cov.dense().dot(v))

    def test_zero_unit_variance_is_singular(self):
        with pytest.raises(SingularCovarianceError):
            BlockCovariance(self.cmap, 0.0, 1.0)

    def test_unknown_method(self):
        with pytest.raises(ValidationError):
            BlockCovariance(self.cmap, 1.0, 1.0, method='lu')


class TestProjectors(TestCase):

    def _design(self):
        rng = make_rng(5)
        return np.column_stack([np.ones(12), rng.standard_normal(12), rng.standard_normal(12)])

    def test_ols_projector_reproduces_columns(self):
        H = self._design()

        assert np.allclose(ols_projector(H).dot(H), np.eye(3), atol=1e-10)

    def test_gls_projector_reproduces_columns(self):
        H = self._design()
        cov = BlockCovariance(build_cluster_map(np.repeat(np.arange(4), 3)), 1.0, 2.0)

        assert np.allclose(gls_projector(H, cov).dot(H), np.eye(3), atol=1e-10)

    def test_gls_equals_ols_under_scalar_covariance(self):
        H = self._design()
        cov = BlockCovariance(build_cluster_map(np.repeat(np.arange(4), 3)), 2.5, 0.0)

        assert np.allclose(gls_projector(H, cov), ols_projector(H), atol=1e-10)

    def test_rank_deficiency_detected(self):
        H = np.column_stack([np.ones(6), np.full(6, 3.0)])

        with pytest.raises(RankDeficiencyError) as info:
            check_rank(H, ['intercept', 'X'])
        assert info.value.rank == 1
        assert info.value.columns == ['intercept', 'X']


class TestGeneration(TestCase):

    def test_same_seed_same_data(self):
        cfg = LinearSimConfig(m=10, n=3, rho_TW=0.3)
        first, _ = generate_linear(cfg, 11)
        second, _ = generate_linear(cfg, 11)

        assert np.array_equal(first.outcome, second.outcome)
        assert np.array_equal(first.exposure, second.exposure)

    def test_full_correlation_gives_identical_effects(self):
        T, W = correlated_effects(make_rng(2), 30, 0.0, 0.0, 1.0, 1.0, 1.0)

        assert np.allclose(T, W)

    def test_shapes(self):
        dataset, latent = generate_linear(LinearSimConfig(m=7, n=4), 1)

        assert dataset.n_units == 28
        assert dataset.n_clusters == 7
        assert latent['T'].shape == (7,)
        assert dataset.continuous_exposure

    def test_constant_covariate_is_rank_deficient(self):
        dataset = Dataset(np.arange(6.0), np.arange(6.0) * 0.5, np.ones(6), np.repeat([1, 2, 3], 2),
                          continuous_exposure=True)

        with pytest.raises(RankDeficiencyError):
            balancing_score_fixed(dataset)


class TestBalancingScores(TestCase):

    def test_blup_matches_dense_formula(self):
        cfg = LinearSimConfig(m=8, n=3, sigma_T=1.3, rho_TW=0.5)
        dataset, _ = generate_linear(cfg, 4)
        bs, alpha_hat, nu_hat = balancing_score_mixed(dataset, cfg.sigma_T, method=DENSE)

        H = np.column_stack([np.ones(dataset.n_units), dataset.covariates])
        A = dataset.cluster_map.dense()
        S = np.eye(dataset.n_units) + cfg.sigma_T ** 2 * A.dot(A.T)
        Si = np.linalg.inv(S)
        alpha = np.linalg.solve(H.T.dot(Si).dot(H), H.T.dot(Si).dot(dataset.exposure))
        nu = cfg.sigma_T ** 2 * A.T.dot(Si).dot(dataset.exposure - H.dot(alpha))

        assert np.allclose(alpha_hat, alpha, atol=1e-8)
        assert np.allclose(nu_hat, nu, atol=1e-8)
        assert np.allclose(bs, H.dot(alpha) + A.dot(nu), atol=1e-8)

    def test_vanishing_cluster_variance_gives_fixed_score(self):
        cfg = LinearSimConfig(m=8, n=4, sigma_T=1.0, rho_TW=0.3)
        dataset, _ = generate_linear(cfg, 12)
        mixed = balancing_score_mixed(dataset, 1e-8)[0]

        assert np.allclose(mixed, balancing_score_fixed(dataset), rtol=0, atol=1e-6)

    def test_methods_agree(self):
        cfg = LinearSimConfig(m=6, n=5, sigma_T=0.8)
        dataset, _ = generate_linear(cfg, 9)

        dense = balancing_score_mixed(dataset, cfg.sigma_T, method=DENSE)[0]
        fast = balancing_score_mixed(dataset, cfg.sigma_T, method=WOODBURY)[0]
        assert np.allclose(dense, fast, atol=1e-10)


class TestLinearBias(TestCase):

    def test_fixed_score_models_unbiased_without_correlation(self):
        for n in (2, 20):
            for s2t in (0.3, 1.2, 2.1, 3.0):
                for s2w in (0.3, 1.2, 2.1, 3.0):
                    cfg = LinearSimConfig(m=50, n=n, sigma_T=np.sqrt(s2t), sigma_W=np.sqrt(s2w), rho_TW=0.0)
                    dataset, _ = generate_linear(cfg, n * 100 + int(10 * s2t) + int(s2w * 1000))
                    bs = balancing_score_fixed(dataset)
                    for name in (MD1, MD3):
                        report = evaluate_linear_model(dataset, bs, VARIANTS[name], cfg)
                        assert abs(report.bias_Z) <= 1e-8

    def test_projection_identities(self):
        cfg = LinearSimConfig(m=10, n=4, rho_TW=0.5)
        dataset, _ = generate_linear(cfg, 21)
        scores = _scores(dataset, cfg)

        for name in LINEAR_MODELS:
            variant = VARIANTS[name]
            report = fit_linear_outcome(dataset, scores[variant.exposure_re], variant, cfg)
            assert report.G.shape == (3, dataset.n_units)
            assert np.allclose(report.G.dot(np.ones(dataset.n_units)), [1.0, 0.0, 0.0], atol=1e-9)
            assert np.allclose(report.G.dot(dataset.exposure), [0.0, 1.0, 0.0], atol=1e-9)

    def test_zero_intercept_design(self):
        cfg = LinearSimConfig(m=10, n=4, rho_TW=0.3, mu_W=0.5, zero_intercept_outcome=True)
        dataset, _ = generate_linear(cfg, 8)
        report = fit_linear_outcome(dataset, balancing_score_fixed(dataset), VARIANTS[MD1], cfg)

        assert report.G.shape == (2, dataset.n_units)
        assert report.z_index == 0
        assert np.allclose(report.G.dot(dataset.exposure), [1.0, 0.0], atol=1e-9)

    def test_conditional_covariance_symmetric_psd(self):
        cfg = LinearSimConfig(m=6, n=3, sigma_T=1.4, sigma_W=0.7, rho_TW=0.9)
        dataset, _ = generate_linear(cfg, 31)
        _, cov = conditional_moments_Y(cfg, dataset)

        assert np.array_equal(cov, cov.T)
        assert np.linalg.eigvalsh(cov).min() > 0

    def test_bias_and_variance_match_conditional_moments(self):
        for seed, (m, n) in enumerate([(3, 2), (4, 3), (5, 4), (3, 4), (5, 2)]):
            cfg = LinearSimConfig(m=m, n=n, sigma_T=1.1, sigma_W=0.9, rho_TW=0.5, mu_T=0.2, mu_W=-0.3)
            dataset, _ = generate_linear(cfg, 40 + seed)
            mean, cov = conditional_moments_Y(cfg, dataset)
            scores = _scores(dataset, cfg)

            for name in LINEAR_MODELS:
                variant = VARIANTS[name]
                report = evaluate_linear_model(dataset, scores[variant.exposure_re], variant, cfg)
                g = report.G[report.z_index]
                assert report.bias_Z == pytest.approx(g.dot(mean) - cfg.beta_Z, abs=1e-9)
                assert report.var_Z == pytest.approx(g.dot(cov).dot(g), rel=1e-9)
                assert report.rmse == pytest.approx(np.sqrt(report.var_Z + report.bias_Z ** 2))

    def test_bias_matches_forward_simulation(self):
        cfg = LinearSimConfig(m=4, n=3, sigma_T=1.2, sigma_W=1.0, rho_TW=0.5)
        dataset, _ = generate_linear(cfg, 77)
        mean, cov = conditional_moments_Y(cfg, dataset)
        draws = make_rng(78).multivariate_normal(mean, cov, size=20000)
        scores = _scores(dataset, cfg)

        for name in LINEAR_MODELS:
            variant = VARIANTS[name]
            report = evaluate_linear_model(dataset, scores[variant.exposure_re], variant, cfg)
            errors = draws.dot(report.G[report.z_index]) - cfg.beta_Z
            se = errors.std(ddof=1) / np.sqrt(errors.size)
            assert abs(errors.mean() - report.bias_Z) < 4.0 * se

    def test_methods_give_same_bias(self):
        cfg = LinearSimConfig(m=12, n=3, rho_TW=0.3)
        dataset, _ = generate_linear(cfg, 13)
        bs = balancing_score_mixed(dataset, cfg.sigma_T)[0]

        fast = evaluate_linear_model(dataset, bs, VARIANTS[MD4], cfg, method=WOODBURY)
        exact = evaluate_linear_model(dataset, bs, VARIANTS[MD4], cfg, method=DENSE)
        assert fast.bias_Z == pytest.approx(exact.bias_Z, abs=1e-10)
        assert fast.var_Z == pytest.approx(exact.var_Z, abs=1e-10)

    def test_estimator_size_checked(self):
        cfg = LinearSimConfig(m=5, n=2)
        dataset, _ = generate_linear(cfg, 1)
        other, _ = generate_linear(cfg.replace(n=3), 1)
        report = fit_linear_outcome(dataset, balancing_score_fixed(dataset), VARIANTS[MD2], cfg)

        with pytest.raises(ValidationError):
            theoretical_bias_variance(report, cfg, other)
