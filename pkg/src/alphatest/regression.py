"""OLS fit of the multi-factor pricing model.

Produces the estimated intercepts (alphas), factor loadings, residuals,
and the projection-weight vector that every downstream test statistic is
built from. The weights are the factor-annihilated intercept column,
normalised so they sum to the number of periods; the intercept estimate
for each security is the weighted time average of its returns.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateEstimateError
from .panel import PanelData
from .validation import as_float_matrix

_OMEGA_FLOOR = 1e-12


def default_bandwidth(n_securities, n_periods):
    """Truncation lag ceil(min(N, T)^(1/8)) used by the long-run estimators."""
    m = min(int(n_securities), int(n_periods))
    if m < 1:
        raise DegenerateEstimateError(f"cannot pick a bandwidth for dimension {m}")
    return int(math.ceil(round(m ** 0.125, 10)))


@dataclass(frozen=True)
class FactorFit:
    """Everything the test statistics need from one OLS pass.

    ``alphas`` (N,) are the intercepts, ``betas`` (N, p) the loadings,
    ``residuals`` (T, N, time-major) the regression residuals, ``weights``
    (T,) the projection weights summing to T, and ``weight_scale`` the time
    average of the factor-annihilated intercept column (the normaliser that
    the weights were divided by).
    """

    alphas: np.ndarray
    betas: np.ndarray
    residuals: np.ndarray
    weights: np.ndarray
    weight_scale: float

    @property
    def n_periods(self):
        return self.residuals.shape[0]

    @property
    def n_securities(self):
        return self.residuals.shape[1]

    @property
    def n_factors(self):
        return self.betas.shape[1]


def projection_weights(factors):
    """Weights turning per-period residuals into intercept-estimator terms.

    Annihilates the factor space from the constant column and rescales by
    its time average, so the result always sums to the number of periods.
    Returns ``(weights, weight_scale)``.
    """
    factors = as_float_matrix(factors, "factors")
    t, p = factors.shape
    ones = np.ones(t)
    coef, _, rank, _ = np.linalg.lstsq(factors, ones, rcond=None)
    if rank < p:
        raise DegenerateEstimateError("singular factor design")
    annihilated = ones - factors @ coef
    weight_scale = float(annihilated.mean())
    if weight_scale <= _OMEGA_FLOOR:
        raise DegenerateEstimateError(
            "intercept spanned by factors", value=weight_scale
        )
    return annihilated / weight_scale, weight_scale


def fit_factor_model(panel):
    """OLS of every security's excess returns on an intercept and the factors."""
    if not isinstance(panel, PanelData):
        panel = PanelData(returns=panel[0], factors=panel[1])
    weights, weight_scale = projection_weights(panel.factors)
    t = panel.n_periods
    design = np.column_stack([np.ones(t), panel.factors])
    coef, _, rank, _ = np.linalg.lstsq(design, panel.returns, rcond=None)
    if rank < design.shape[1]:
        raise DegenerateEstimateError("singular factor design")
    residuals = panel.returns - design @ coef
    return FactorFit(
        alphas=coef[0].copy(),
        betas=coef[1:].T.copy(),
        residuals=np.ascontiguousarray(residuals),
        weights=weights,
        weight_scale=weight_scale,
    )
