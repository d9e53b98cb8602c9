"""Sum-type alpha test for serially dependent errors.

The statistic is the squared norm of the estimated intercepts. Its null
mean is estimated from weighted residual autocovariance traces up to a
truncation lag, and its null variance from split-sample products of
weighted residual cross moments, so both survive serial dependence in the
idiosyncratic errors. The standardized statistic is asymptotically
standard normal under the null.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DataFormatError, DegenerateEstimateError
from .kernels import normal_sf
from .outcomes import TestOutcome
from .regression import default_bandwidth
from .validation import as_float_matrix, as_float_vector, check_lag


@dataclass(frozen=True)
class SumTestInternals:
    """Intermediate estimates behind one sum-test evaluation.

    ``autocov_traces[h]`` is the weighted residual autocovariance trace at
    lag h; ``product_traces[h1, h2]`` the split-sample estimate of the
    trace of the product of the lag-h1 and lag-h2 autocovariances.
    """

    autocov_traces: np.ndarray
    mean: float
    product_traces: np.ndarray
    variance: float
    bandwidth: int


def _weighted(residuals, weights):
    residuals = as_float_matrix(residuals, "residuals")
    weights = as_float_vector(weights, "weights")
    if weights.shape[0] != residuals.shape[0]:
        raise DataFormatError("residuals and weights disagree on the number of periods")
    return residuals * weights[:, None]


def autocov_trace(residuals, weights, lag):
    """Trace of the weighted residual autocovariance at ``lag``.

    Only the trace is formed; the N x N outer product never materializes.
    """
    u = _weighted(residuals, weights)
    t = u.shape[0]
    lag = check_lag(lag)
    if lag > t - 2:
        raise DataFormatError(f"lag exceeds sample: lag={lag}, periods={t}")
    return float(np.einsum("ti,ti->", u[lag:], u[: t - lag])) / (t - lag)


def null_mean(residuals, weights, bandwidth, n_factors):
    """Estimated null mean of the sum statistic.

    Combines the lag-0 trace with down-weighted traces at lags 1..bandwidth,
    using the degrees-of-freedom corrected denominator (periods minus
    factors minus one) rather than the raw period count.
    """
    u = _weighted(residuals, weights)
    t = u.shape[0]
    bandwidth = check_lag(bandwidth, "bandwidth")
    if bandwidth > t - 2:
        raise DataFormatError(f"bandwidth exceeds sample: {bandwidth} > {t - 2}")
    dof = t - int(n_factors) - 1
    if dof <= 0:
        raise DataFormatError(f"non-positive degrees of freedom: {dof}")
    traces = _autocov_traces(u, bandwidth)
    total = traces[0]
    for h in range(1, bandwidth + 1):
        total += 2.0 * (1.0 - h / dof) * traces[h]
    return total / dof


def _autocov_traces(u, bandwidth):
    t = u.shape[0]
    return np.array(
        [np.einsum("ti,ti->", u[h:], u[: t - h]) / (t - h) for h in range(bandwidth + 1)]
    )


def _check_split(t, lag_a, lag_b):
    if t < 2 * (max(lag_a, lag_b) + 1) + 2:
        raise DegenerateEstimateError(
            f"sample too short for split: {t} periods with lags ({lag_a}, {lag_b})"
        )


def _product_trace(gram, t, lag_a, lag_b):
    """Split-sample product-trace sum from the weighted Gram matrix."""
    half = t // 2
    nrow = half - lag_b
    ncol = t - lag_b
    head = gram[0:nrow, 0:ncol]
    shifted = gram[lag_a : lag_a + nrow, lag_b : lag_b + ncol]
    numerator = float(np.triu(head * shifted, k=half).sum())
    denominator = (t - lag_b / 2.0 - 1.5 * half + 0.5) * (half - lag_b)
    return numerator / denominator


def autocov_product_trace(residuals, weights, lag_a, lag_b):
    """Estimate of the trace of the product of two residual autocovariances.

    Pairs each early period with periods at least half a sample later so
    that, under short-range dependence, only the intended lag products
    survive; the pair count in the denominator matches that index set.
    """
    u = _weighted(residuals, weights)
    t = u.shape[0]
    lag_a = check_lag(lag_a, "lag_a")
    lag_b = check_lag(lag_b, "lag_b")
    _check_split(t, lag_a, lag_b)
    gram = u @ u.T
    return _product_trace(gram, t, lag_a, lag_b)


def null_variance(residuals, weights, bandwidth):
    """Estimated null variance of the sum statistic.

    Fails rather than returning a non-positive scale; tiny samples can
    produce one, and a clamped scale would silently give meaningless
    p-values.
    """
    u = _weighted(residuals, weights)
    t = u.shape[0]
    bandwidth = check_lag(bandwidth, "bandwidth")
    _check_split(t, bandwidth, bandwidth)
    gram = u @ u.T
    table = _product_trace_table(gram, t, bandwidth)
    return _combine_variance(table, t)


def _product_trace_table(gram, t, bandwidth):
    table = np.empty((bandwidth + 1, bandwidth + 1))
    for a in range(bandwidth + 1):
        for b in range(bandwidth + 1):
            table[a, b] = _product_trace(gram, t, a, b)
    return table


def _combine_variance(table, t):
    value = (2.0 / t**2) * (
        table[0, 0]
        + 2.0 * table[0, 1:].sum()
        + 2.0 * table[1:, 0].sum()
        + 4.0 * table[1:, 1:].sum()
    )
    if value <= 0.0:
        raise DegenerateEstimateError("degenerate variance estimate", value=value)
    return value


def sum_test_internals(fit, bandwidth=None):
    """All intermediate sum-test estimates for a fitted factor model."""
    if bandwidth is None:
        bandwidth = default_bandwidth(fit.n_securities, fit.n_periods)
    bandwidth = check_lag(bandwidth, "bandwidth")
    u = _weighted(fit.residuals, fit.weights)
    t = u.shape[0]
    if bandwidth > t - 2:
        raise DataFormatError(f"bandwidth exceeds sample: {bandwidth} > {t - 2}")
    _check_split(t, bandwidth, bandwidth)
    traces = _autocov_traces(u, bandwidth)
    dof = t - fit.n_factors - 1
    mean = (
        traces[0]
        + sum(2.0 * (1.0 - h / dof) * traces[h] for h in range(1, bandwidth + 1))
    ) / dof
    gram = u @ u.T
    table = _product_trace_table(gram, t, bandwidth)
    variance = _combine_variance(table, t)
    return SumTestInternals(
        autocov_traces=traces,
        mean=float(mean),
        product_traces=table,
        variance=float(variance),
        bandwidth=bandwidth,
    )


def sum_test(fit, bandwidth=None):
    """Sum-type test of whether every intercept is zero.

    Returns the squared-norm statistic, its standardized value, and the
    one-sided normal p-value. Powerful against dense alternatives.
    """
    internals = sum_test_internals(fit, bandwidth)
    statistic = float(fit.alphas @ fit.alphas)
    z = (statistic - internals.mean) / math.sqrt(internals.variance)
    return TestOutcome(method="sum", statistic=statistic, adjusted=z, p_value=normal_sf(z))
