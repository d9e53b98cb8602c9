"""Max-type alpha test for serially dependent errors.

The statistic is the largest squared intercept scaled by the period count
and that security's truncated long-run variance, estimated from weighted
residual lag moments with a flat kernel. Centered by 2 log N - log log N,
it converges to a Gumbel-type law under the null, which supplies the
p-value. Powerful against sparse alternatives.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DataFormatError, DegenerateEstimateError
from .kernels import gumbel_limit_sf
from .outcomes import TestOutcome
from .regression import default_bandwidth
from .validation import as_float_vector, check_lag
from .sumtest import _weighted

VARIANCE_FLOOR = 0.05


@dataclass(frozen=True)
class MaxTestInternals:
    """Per-security long-run variance pieces behind one max-test evaluation.

    ``lag_moments`` is N x (bandwidth + 1): weighted residual lag products
    per security. ``longrun_variances`` holds the flat-kernel sums after
    flooring; ``floored`` marks securities where the floor engaged.
    """

    lag_moments: np.ndarray
    longrun_variances: np.ndarray
    floored: np.ndarray
    bandwidth: int


def _lag_moments(u, bandwidth):
    t = u.shape[0]
    return np.stack(
        [(u[h:] * u[: t - h]).sum(axis=0) / (t - h) for h in range(bandwidth + 1)],
        axis=1,
    )


def _floor_variances(moments):
    base = moments[:, 0]
    if np.any(base == 0.0):
        raise DegenerateEstimateError("degenerate security variance: identically zero residual series")
    raw = base + 2.0 * moments[:, 1:].sum(axis=1)
    floor = VARIANCE_FLOOR * base
    floored = raw <= floor
    return np.where(floored, floor, raw), floored


def longrun_variance(series, weights, bandwidth):
    """Truncated long-run variance of one security's weighted residuals.

    Flat kernel over the symmetric lag window: the lag-0 moment plus twice
    the moments at lags 1..bandwidth. A non-positive value is floored at
    a small fraction of the lag-0 moment, which preserves scale without
    fabricating dependence.
    """
    series = as_float_vector(series, "series")
    u = _weighted(series.reshape(-1, 1), weights)
    t = u.shape[0]
    bandwidth = check_lag(bandwidth, "bandwidth")
    if bandwidth > t - 2:
        raise DataFormatError(f"bandwidth exceeds sample: {bandwidth} > {t - 2}")
    variances, _ = _floor_variances(_lag_moments(u, bandwidth))
    return float(variances[0])


def max_test_internals(fit, bandwidth=None):
    """Lag moments, floored long-run variances, and the floor mask."""
    if bandwidth is None:
        bandwidth = default_bandwidth(fit.n_securities, fit.n_periods)
    bandwidth = check_lag(bandwidth, "bandwidth")
    t = fit.n_periods
    if bandwidth > t - 2:
        raise DataFormatError(f"bandwidth exceeds sample: {bandwidth} > {t - 2}")
    u = _weighted(fit.residuals, fit.weights)
    moments = _lag_moments(u, bandwidth)
    variances, floored = _floor_variances(moments)
    return MaxTestInternals(
        lag_moments=moments,
        longrun_variances=variances,
        floored=floored,
        bandwidth=bandwidth,
    )


def max_test(fit, bandwidth=None):
    """Max-type test of whether every intercept is zero.

    Returns the max standardized squared intercept, its value centered by
    2 log N - log log N, and the p-value under the Gumbel-type limit law.
    Ties in the max resolve to the lowest security index, which keeps the
    statistic deterministic under any evaluation order.
    """
    n = fit.n_securities
    if n < 3:
        raise DegenerateEstimateError(
            f"dimension too small for extreme-value centering: {n} securities"
        )
    internals = max_test_internals(fit, bandwidth)
    ratios = fit.n_periods * fit.alphas**2 / internals.longrun_variances
    statistic = float(ratios[int(np.argmax(ratios))])
    centered = statistic - 2.0 * math.log(n) + math.log(math.log(n))
    return TestOutcome(
        method="max",
        statistic=statistic,
        adjusted=centered,
        p_value=gumbel_limit_sf(centered),
    )
