"""Residual autocorrelation diagnostics."""

import json
from dataclasses import dataclass

import numpy as np

from .exceptions import DataFormatError, DegenerateEstimateError
from .kernels import chi_square_sf
from .study import SCHEMA_VERSION
from .validation import as_float_vector

DEFAULT_LAGS = 10


def box_pierce(series, lags=DEFAULT_LAGS):
    """Box-Pierce portmanteau p-value for one residual series.

    The statistic is the period count times the sum of squared sample
    autocorrelations at lags 1..lags, referred to a chi-square law with
    ``lags`` degrees of freedom.
    """
    series = as_float_vector(series, "series")
    t = series.shape[0]
    lags = int(lags)
    if lags < 1:
        raise DataFormatError(f"need at least one lag, got {lags}")
    if t <= lags:
        raise DataFormatError(f"series of length {t} too short for {lags} lags")
    centered = series - series.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        raise DegenerateEstimateError("zero-variance series")
    statistic = 0.0
    for h in range(1, lags + 1):
        rho = float(centered[h:] @ centered[:-h]) / denom
        statistic += rho * rho
    statistic *= t
    return chi_square_sf(statistic, lags)


@dataclass(frozen=True)
class DiagnosticsReport:
    """Per-security Box-Pierce p-values plus their histogram over [0, 1]."""

    security_ids: list
    p_values: np.ndarray
    lags: int
    bin_counts: np.ndarray

    def to_csv(self):
        rows = ["security_id,p_value"]
        for sid, p in zip(self.security_ids, self.p_values):
            rows.append(f"{sid},{float(p)!r}")
        return "\n".join(rows) + "\n"

    def to_json(self):
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "kind": "diagnostics_report",
                "lags": self.lags,
                "p_values": {
                    sid: p for sid, p in zip(self.security_ids, map(float, self.p_values))
                },
                "histogram": {
                    "bin_counts": [int(c) for c in self.bin_counts],
                    "range": [0.0, 1.0],
                },
            },
            sort_keys=True,
        )


def residual_diagnostics(fit, security_ids=None, lags=DEFAULT_LAGS, bins=10):
    """Box-Pierce test on every security's residual series."""
    n = fit.n_securities
    if security_ids is None:
        security_ids = [f"sec{i + 1}" for i in range(n)]
    p_values = np.array([box_pierce(fit.residuals[:, i], lags) for i in range(n)])
    bin_counts, _ = np.histogram(p_values, bins=int(bins), range=(0.0, 1.0))
    return DiagnosticsReport(
        security_ids=list(security_ids),
        p_values=p_values,
        lags=int(lags),
        bin_counts=bin_counts,
    )
