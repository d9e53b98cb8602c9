import numpy as np
import pytest

from alphatest import PanelData, fit_factor_model

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240801)


def make_panel(rng, n_periods=10, n_securities=3, n_factors=2, alphas=None):
    factors = rng.standard_normal((n_periods, n_factors))
    betas = rng.standard_normal((n_securities, n_factors))
    if alphas is None:
        alphas = rng.standard_normal(n_securities)
    noise = rng.standard_normal((n_periods, n_securities))
    returns = alphas[None, :] + factors @ betas.T + noise
    return PanelData(returns=returns, factors=factors)


@pytest.fixture
def small_fit(rng):
    return fit_factor_model(make_panel(rng, n_periods=12, n_securities=4, n_factors=2))
