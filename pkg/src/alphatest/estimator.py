"""Scikit-learn style estimator wrapping the fit and the three tests."""

from sklearn.base import BaseEstimator

from .combine import cauchy_combine, min_p_combine
from .exceptions import DataFormatError
from .maxtest import max_test
from .panel import PanelData
from .regression import default_bandwidth, fit_factor_model
from .sumtest import sum_test
from .validation import as_float_matrix


class AlphaTest(BaseEstimator):
    """Tests whether all intercepts of a linear factor pricing model are zero.

    Fits each column of ``y`` (T x N excess returns) on an intercept plus
    the observed factors ``X`` (T x p) by OLS, then runs the sum-type,
    max-type, and Cauchy-combination tests, all robust to serially
    dependent idiosyncratic errors.

    Parameters
    ----------
    bandwidth : int, optional
        Truncation lag for the long-run estimators. Defaults to
        ceil(min(N, T)^(1/8)).
    level : float, default 0.05
        Nominal level used by :meth:`reject`.

    Attributes
    ----------
    alphas_ : ndarray of shape (N,)
        Estimated intercepts.
    betas_ : ndarray of shape (N, p)
        Estimated factor loadings.
    residuals_ : ndarray of shape (T, N)
        OLS residuals, orthogonal to the intercept and the factors.
    outcomes_ : dict
        ``TestOutcome`` per method key: "sum", "max", "cc", "min_p".
    p_values_ : dict
        P-value per method key.

    Examples
    --------
    >>> test = AlphaTest().fit(factors, returns)   # doctest: +SKIP
    >>> test.p_values_["cc"]                       # doctest: +SKIP
    """

    def __init__(self, bandwidth=None, level=0.05):
        self.bandwidth = bandwidth
        self.level = level

    def fit(self, X, y):
        """Fit the factor model and evaluate all tests.

        ``X`` holds the factor realizations (T x p) and ``y`` the excess
        returns (T x N).
        """
        X = as_float_matrix(X, "X")
        y = as_float_matrix(y, "y")
        panel = PanelData(returns=y, factors=X)
        fit = fit_factor_model(panel)
        self.model_ = fit
        self.alphas_ = fit.alphas
        self.betas_ = fit.betas
        self.residuals_ = fit.residuals
        self.weights_ = fit.weights
        self.bandwidth_ = (
            int(self.bandwidth)
            if self.bandwidth is not None
            else default_bandwidth(fit.n_securities, fit.n_periods)
        )
        sum_outcome = sum_test(fit, self.bandwidth_)
        max_outcome = max_test(fit, self.bandwidth_)
        self.outcomes_ = {
            "sum": sum_outcome,
            "max": max_outcome,
            "cc": cauchy_combine(max_outcome.p_value, sum_outcome.p_value),
            "min_p": min_p_combine(max_outcome.p_value, sum_outcome.p_value),
        }
        self.p_values_ = {k: v.p_value for k, v in self.outcomes_.items()}
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        """Model-implied excess returns for new factor realizations."""
        self._check_fitted()
        X = as_float_matrix(X, "X")
        if X.shape[1] != self.betas_.shape[1]:
            raise DataFormatError(
                f"expected {self.betas_.shape[1]} factor columns, got {X.shape[1]}"
            )
        return self.alphas_[None, :] + X @ self.betas_.T

    def reject(self, level=None):
        """Rejection indicator per method at ``level`` (defaults to ``self.level``)."""
        self._check_fitted()
        level = self.level if level is None else float(level)
        return {k: bool(p <= level) for k, p in self.p_values_.items()}

    def _check_fitted(self):
        if not hasattr(self, "outcomes_"):
            raise DataFormatError("this AlphaTest instance is not fitted yet")
