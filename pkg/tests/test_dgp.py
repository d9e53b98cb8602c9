import math

import numpy as np
import pytest

from alphatest import (
    AlphaSpec,
    DataFormatError,
    DegenerateEstimateError,
    Dependence,
    DgpConfig,
    Innovation,
    RngStream,
    build_band_matrices,
    generate_panel,
    simulate_alphas,
    simulate_betas,
    simulate_errors,
    simulate_factors,
)


class TestFactors:
    def test_deterministic(self):
        a = simulate_factors(50, RngStream(11, 1))
        b = simulate_factors(50, RngStream(11, 1))
        np.testing.assert_array_equal(a, b)
        c = simulate_factors(50, RngStream(11, 2))
        assert not np.array_equal(a, c)

    def test_shape(self):
        assert simulate_factors(7, RngStream(0)).shape == (7, 3)

    def test_market_long_run_mean(self):
        # stationary AR(1) mean 0.53 / (1 - 0.06)
        path = simulate_factors(200_000, RngStream(42))
        assert abs(path[:, 0].mean() / (0.53 / 0.94) - 1.0) < 0.02

    def test_burn_in_discarded(self):
        # a retained path must not start at the pre-sample initial level zero
        path = simulate_factors(5, RngStream(3))
        assert not np.any(path[0] == 0.0)


class TestBetas:
    def test_ranges(self):
        betas = simulate_betas(10_000, RngStream(7))
        assert betas.shape == (10_000, 3)
        assert betas[:, 0].min() >= 0.2 and betas[:, 0].max() <= 2.0
        assert betas[:, 1].min() >= -1.0 and betas[:, 1].max() <= 1.5
        assert betas[:, 2].min() >= -1.5 and betas[:, 2].max() <= 1.5

    def test_second_column_mean(self):
        betas = simulate_betas(100_000, RngStream(8))
        assert abs(betas[:, 1].mean() - 0.25) < 0.01 * 2.5

    def test_deterministic(self):
        a = simulate_betas(50, RngStream(1, 5))
        b = simulate_betas(50, RngStream(1, 5))
        np.testing.assert_array_equal(a, b)


class TestBandMatrices:
    def test_covariance_entries(self):
        sigma, _, _ = build_band_matrices(10, 0.9, 0.6, 0.4, Dependence.M_DEPENDENT)
        assert sigma[0, 0] == 1.0
        assert abs(sigma[0, 1] - 0.4) < 1e-15
        assert abs(sigma[0, 2] - 0.1) < 1e-15

    def test_band_zeroing(self):
        sigma, filters, _ = build_band_matrices(10, 0.3, 0.6, 0.4, Dependence.M_DEPENDENT)
        assert sigma[0, 4] == 0.0
        assert sigma[0, 9] == 0.0
        assert filters[1][0, 4] == 0.0

    def test_filter_scaling(self):
        _, filters, _ = build_band_matrices(8, 0.9, 0.6, 0.4, Dependence.M_DEPENDENT)
        assert filters[0] == 1.0
        assert abs(filters[1][0, 0] - 0.6) < 1e-15
        assert abs(filters[1][0, 1] - 0.6) < 1e-15
        assert abs(filters[2][0, 0] - 0.3) < 1e-15
        assert abs(filters[2][2, 4] - 0.3 / 4.0) < 1e-15

    def test_infinite_mode_scalar_tail(self):
        _, filters, _ = build_band_matrices(8, 0.9, 0.6, 0.4, Dependence.INFINITE)
        assert len(filters) == 14
        for h in range(3, 14):
            assert isinstance(filters[h], float)
            assert abs(filters[h] - math.exp(-2 * h)) < 1e-18

    def test_cholesky_reconstruction(self):
        sigma, _, chol = build_band_matrices(50, 0.9, 0.6, 0.4, Dependence.M_DEPENDENT)
        assert np.abs(chol @ chol.T - sigma).max() <= 1e-10

    def test_non_positive_definite_reports_eigenvalue(self):
        with pytest.raises(DegenerateEstimateError, match="positive definite") as err:
            build_band_matrices(40, 0.9, 0.6, -0.8, Dependence.INDEPENDENT)
        assert err.value.value < 0


class TestErrors:
    def test_independent_mode_covariance(self):
        config = DgpConfig(n_securities=20, n_periods=50_000, seed=1)
        errors = simulate_errors(config, RngStream(1))
        sigma, _, _ = build_band_matrices(20, 0.9, 0.6, 0.4, Dependence.INDEPENDENT)
        sample = errors.T @ errors / errors.shape[0]
        assert np.abs(sample - sigma).max() < 0.05

    def test_dependence_truncation_at_lag_three(self):
        config = DgpConfig(
            n_securities=20, n_periods=50_000,
            dependence=Dependence.M_DEPENDENT, seed=2,
        )
        errors = simulate_errors(config, RngStream(2))
        terms = (errors[3:] * errors[:-3]).sum(axis=1) / 20.0
        mc_se = terms.std(ddof=1) / math.sqrt(len(terms))
        assert abs(terms.mean()) < 4 * mc_se

    def test_deterministic(self):
        config = DgpConfig(n_securities=10, n_periods=30, dependence=Dependence.M_DEPENDENT, seed=3)
        a = simulate_errors(config, RngStream(3, 4))
        b = simulate_errors(config, RngStream(3, 4))
        np.testing.assert_array_equal(a, b)

    def test_student_innovations_differ_from_normal(self):
        base = DgpConfig(n_securities=5, n_periods=20, seed=4)
        heavy = DgpConfig(n_securities=5, n_periods=20, innovation=Innovation.STUDENT_T3, seed=4)
        a = simulate_errors(base, RngStream(4))
        b = simulate_errors(heavy, RngStream(4))
        assert not np.array_equal(a, b)


class TestAlphas:
    def test_null_vector(self):
        alphas = simulate_alphas(100, 400, AlphaSpec.null(), RngStream(5))
        assert not np.any(alphas)

    def test_sparse_uniform_bound_and_support(self):
        spec = AlphaSpec.sparse_uniform(15, 80.0)
        alphas = simulate_alphas(500, 400, spec, RngStream(6), scale=80.0)
        nonzero = alphas[alphas != 0]
        bound = math.sqrt(80.0 * math.log(500) / (15 * 400))
        assert abs(bound - 0.28787) < 1e-4
        assert len(nonzero) == 15
        assert nonzero.min() >= 0.0 and nonzero.max() <= bound

    def test_signal_strength_bound(self):
        spec = AlphaSpec.signal_strength(5, 2.5)
        alphas = simulate_alphas(200, 300, spec, RngStream(7))
        nonzero = alphas[alphas != 0]
        assert len(nonzero) == 5
        assert nonzero.max() <= math.sqrt(2.5 * math.log(200) / 300)

    def test_support_too_large(self):
        with pytest.raises(DataFormatError):
            simulate_alphas(10, 100, AlphaSpec.sparse_uniform(11, 80.0), RngStream(8))

    def test_invalid_kind(self):
        with pytest.raises(DataFormatError):
            AlphaSpec(kind="dense")


class TestGeneratePanel:
    def test_reconstruction_from_documented_draw_order(self):
        config = DgpConfig(
            n_securities=12, n_periods=40,
            dependence=Dependence.M_DEPENDENT,
            alpha=AlphaSpec.sparse_uniform(3), seed=9,
        )
        sim = generate_panel(config)
        stream = RngStream(9, 0)
        factors = simulate_factors(40, stream)
        betas = simulate_betas(12, stream)
        errors = simulate_errors(config, stream)
        alphas = simulate_alphas(12, 40, config.alpha, stream, scale=config.sparse_scale())
        np.testing.assert_array_equal(sim.panel.factors, factors)
        np.testing.assert_array_equal(sim.betas, betas)
        np.testing.assert_array_equal(sim.alphas, alphas)
        np.testing.assert_array_equal(
            sim.panel.returns, alphas[None, :] + factors @ betas.T + errors
        )

    def test_null_spec_residual_means_near_zero(self):
        config = DgpConfig(n_securities=8, n_periods=4000, seed=10)
        sim = generate_panel(config)
        implied = sim.panel.returns - sim.panel.factors @ sim.betas.T
        assert np.abs(implied.mean(axis=0)).max() < 0.1

    def test_determinism_and_stream_separation(self):
        config = DgpConfig(n_securities=6, n_periods=20, seed=11)
        a = generate_panel(config)
        b = generate_panel(config)
        np.testing.assert_array_equal(a.panel.returns, b.panel.returns)
        c = generate_panel(config, stream=RngStream(11, 1))
        assert not np.array_equal(a.panel.returns, c.panel.returns)

    def test_common_random_numbers_across_alpha_specs(self):
        base = DgpConfig(n_securities=6, n_periods=20, seed=12)
        null = generate_panel(base)
        alt = generate_panel(base.with_alpha(AlphaSpec.sparse_uniform(2)))
        np.testing.assert_array_equal(null.panel.factors, alt.panel.factors)
        np.testing.assert_array_equal(null.betas, alt.betas)

    def test_config_validation(self):
        with pytest.raises(DataFormatError):
            DgpConfig(n_securities=10, n_periods=20, omega_band=0.0)
        with pytest.raises(DataFormatError):
            DgpConfig(n_securities=10, n_periods=20, alpha=AlphaSpec.sparse_uniform(11))

    def test_sparse_scale_defaults(self):
        base = dict(n_securities=10, n_periods=20, alpha=AlphaSpec.sparse_uniform(2))
        assert DgpConfig(dependence=Dependence.INDEPENDENT, **base).sparse_scale() == 12.0
        assert DgpConfig(dependence=Dependence.M_DEPENDENT, **base).sparse_scale() == 80.0
        assert DgpConfig(dependence=Dependence.INFINITE, **base).sparse_scale() == 90.0
        override = DgpConfig(alpha=AlphaSpec.sparse_uniform(2, c=33.0),
                             n_securities=10, n_periods=20)
        assert override.sparse_scale() == 33.0
