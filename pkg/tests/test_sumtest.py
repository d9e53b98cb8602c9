import math

import numpy as np
import pytest

from alphatest import (
    DataFormatError,
    DegenerateEstimateError,
    FactorFit,
    autocov_product_trace,
    autocov_trace,
    normal_sf,
    null_mean,
    null_variance,
    sum_test,
    sum_test_internals,
)
from conftest import make_panel
from alphatest import fit_factor_model


def trace_oracle(residuals, weights, lag):
    t, n = residuals.shape
    total = 0.0
    for k in range(1, t - lag + 1):
        for i in range(n):
            total += (residuals[k - 1 + lag, i] * residuals[k - 1, i]
                      * weights[k - 1 + lag] * weights[k - 1])
    return total / (t - lag)


def product_trace_oracle(residuals, weights, lag_a, lag_b):
    """Quadruple-product split-sample sum, indexed exactly as printed."""
    t = residuals.shape[0]
    half = t // 2
    total = 0.0
    for k in range(1, half - lag_b + 1):
        for s in range(k + half, t - lag_b + 1):
            total += (
                float(residuals[k - 1] @ residuals[s - 1])
                * float(residuals[k - 1 + lag_a] @ residuals[s - 1 + lag_b])
                * weights[k - 1] * weights[s - 1]
                * weights[k - 1 + lag_a] * weights[s - 1 + lag_b]
            )
    return total / ((t - lag_b / 2 - 1.5 * half + 0.5) * (half - lag_b))


def mean_oracle(residuals, weights, bandwidth, n_factors):
    t = residuals.shape[0]
    dof = t - n_factors - 1
    total = trace_oracle(residuals, weights, 0)
    for h in range(1, bandwidth + 1):
        total += 2 * (1 - h / dof) * trace_oracle(residuals, weights, h)
    return total / dof


class TestAutocovTrace:
    def test_zero_residuals(self):
        residuals = np.zeros((8, 3))
        for h in range(3):
            assert autocov_trace(residuals, np.ones(8), h) == 0.0

    def test_lag_zero_unit_weights_is_mean_square(self, rng):
        residuals = rng.standard_normal((9, 4))
        value = autocov_trace(residuals, np.ones(9), 0)
        assert value >= 0.0
        assert abs(value - (residuals**2).sum() / 9) < 1e-12

    def test_matches_double_loop(self, rng):
        residuals = rng.standard_normal((6, 2))
        weights = rng.uniform(0.5, 1.5, 6)
        oracle = trace_oracle(residuals, weights, 1)
        assert abs(autocov_trace(residuals, weights, 1) - oracle) <= 1e-12 * abs(oracle)

    def test_lag_exceeding_sample(self, rng):
        residuals = rng.standard_normal((6, 2))
        with pytest.raises(DataFormatError, match="lag exceeds sample"):
            autocov_trace(residuals, np.ones(6), 5)


class TestNullMean:
    def test_bandwidth_zero_reduces_to_lag_zero_trace(self, rng):
        residuals = rng.standard_normal((10, 3))
        weights = rng.uniform(0.5, 1.5, 10)
        expected = trace_oracle(residuals, weights, 0) / (10 - 2 - 1)
        assert abs(null_mean(residuals, weights, 0, 2) - expected) < 1e-12

    def test_zero_residuals(self):
        assert null_mean(np.zeros((10, 2)), np.ones(10), 2, 1) == 0.0

    def test_matches_oracle(self, rng):
        residuals = rng.standard_normal((12, 3))
        weights = rng.uniform(0.5, 1.5, 12)
        oracle = mean_oracle(residuals, weights, 2, 1)
        assert abs(null_mean(residuals, weights, 2, 1) - oracle) <= 1e-12 * abs(oracle)


class TestProductTrace:
    def test_zero_residuals(self):
        assert autocov_product_trace(np.zeros((12, 2)), np.ones(12), 0, 0) == 0.0

    def test_denominator_equals_pair_count(self):
        # T=20, lag_b=2: the index set has sum_{t=1}^{8} (9 - t) = 36 pairs
        t, lag_b = 20, 2
        half = t // 2
        count = sum(1 for k in range(1, half - lag_b + 1) for s in range(k + half, t - lag_b + 1))
        denominator = (t - lag_b / 2 - 1.5 * half + 0.5) * (half - lag_b)
        assert count == 36
        assert denominator == 36.0

    def test_matches_quadruple_loop(self, rng):
        residuals = rng.standard_normal((12, 3))
        weights = rng.uniform(0.5, 1.5, 12)
        for lag_a in range(3):
            for lag_b in range(3):
                oracle = product_trace_oracle(residuals, weights, lag_a, lag_b)
                value = autocov_product_trace(residuals, weights, lag_a, lag_b)
                assert abs(value - oracle) <= 1e-10 * max(1.0, abs(oracle))

    def test_short_sample_rejected(self, rng):
        residuals = rng.standard_normal((7, 2))
        with pytest.raises(DegenerateEstimateError, match="sample too short"):
            autocov_product_trace(residuals, np.ones(7), 2, 2)


class TestNullVariance:
    def test_bandwidth_zero_single_term(self, rng):
        residuals = rng.standard_normal((14, 3))
        weights = rng.uniform(0.5, 1.5, 14)
        expected = (2 / 14**2) * product_trace_oracle(residuals, weights, 0, 0)
        assert abs(null_variance(residuals, weights, 0) - expected) <= 1e-10 * abs(expected)

    def test_zero_residuals_degenerate(self):
        with pytest.raises(DegenerateEstimateError, match="degenerate variance estimate") as err:
            null_variance(np.zeros((12, 2)), np.ones(12), 0)
        assert err.value.value == 0.0

    def test_lag_zero_moment_tracks_dimension(self):
        # mean of S_{0,0} over seeds targets tr(Sigma^2) = N for iid unit noise
        n, t, seeds = 50, 400, 200
        values = []
        for seed in range(seeds):
            gen = np.random.default_rng(seed)
            residuals = gen.standard_normal((t, n))
            values.append(autocov_product_trace(residuals, np.ones(t), 0, 0))
        assert abs(np.mean(values) - n) < 0.1 * n


class TestSumTest:
    def test_assembled_from_components(self, rng):
        panel = make_panel(rng, n_periods=30, n_securities=5, n_factors=2)
        fit = fit_factor_model(panel)
        outcome = sum_test(fit, 2)
        mean = null_mean(fit.residuals, fit.weights, 2, fit.n_factors)
        variance = null_variance(fit.residuals, fit.weights, 2)
        statistic = float(fit.alphas @ fit.alphas)
        z = (statistic - mean) / math.sqrt(variance)
        assert abs(outcome.statistic - statistic) < 1e-12
        assert abs(outcome.adjusted - z) <= 1e-10 * max(1.0, abs(z))
        assert abs(outcome.p_value - normal_sf(z)) < 1e-14

    def test_internals_consistency(self, rng):
        panel = make_panel(rng, n_periods=24, n_securities=4, n_factors=2)
        fit = fit_factor_model(panel)
        internals = sum_test_internals(fit, 2)
        combo = (2 / 24**2) * (
            internals.product_traces[0, 0]
            + 2 * internals.product_traces[0, 1:].sum()
            + 2 * internals.product_traces[1:, 0].sum()
            + 4 * internals.product_traces[1:, 1:].sum()
        )
        assert abs(internals.variance - combo) < 1e-12

    def test_p_value_decreasing_in_statistic(self, rng):
        panel = make_panel(rng, n_periods=30, n_securities=5, n_factors=2)
        fit = fit_factor_model(panel)
        boosted = FactorFit(
            alphas=fit.alphas * 3.0,
            betas=fit.betas,
            residuals=fit.residuals,
            weights=fit.weights,
            weight_scale=fit.weight_scale,
        )
        assert sum_test(boosted, 2).p_value < sum_test(fit, 2).p_value

    def test_default_bandwidth_used(self, rng):
        panel = make_panel(rng, n_periods=40, n_securities=6, n_factors=2)
        fit = fit_factor_model(panel)
        assert sum_test(fit).adjusted == sum_test(fit, 2).adjusted

    def test_dense_alternative_shifts_standardized_statistic(self):
        # a dense planted alpha moves the mean of z up by far more than
        # three standard errors of the null mean
        from alphatest import AlphaSpec, Dependence, DgpConfig, run_study

        base = DgpConfig(n_securities=60, n_periods=120,
                         dependence=Dependence.M_DEPENDENT, seed=71)
        dense = base.with_alpha(AlphaSpec.signal_strength(60, 4.0))
        null = run_study(base, reps=100, keep_raw=True)
        alt = run_study(dense, reps=100, keep_raw=True)
        z_null = np.array([rec.z_sum for rec in null.raw])
        z_alt = np.array([rec.z_sum for rec in alt.raw])
        se = z_null.std(ddof=1) / math.sqrt(len(z_null))
        assert z_alt.mean() > z_null.mean() + 3 * se

    def test_gram_path_matches_naive_on_random_fixtures(self, rng):
        for _ in range(20):
            t = int(rng.integers(10, 15))
            n = int(rng.integers(1, 5))
            residuals = rng.standard_normal((t, n))
            weights = rng.uniform(0.5, 1.5, t)
            for lag_a in range(3):
                for lag_b in range(3):
                    if t < 2 * (max(lag_a, lag_b) + 1) + 2:
                        continue
                    oracle = product_trace_oracle(residuals, weights, lag_a, lag_b)
                    value = autocov_product_trace(residuals, weights, lag_a, lag_b)
                    assert abs(value - oracle) <= 1e-10 * max(1.0, abs(oracle))
