"""Zero-alpha tests for high-dimensional linear factor pricing models
with serially dependent idiosyncratic errors.

Provides a sum-type test for dense alternatives, a max-type test for
sparse alternatives, their Cauchy combination, the simulation machinery
that validates their size and power, and CSV/rolling-window tooling for
real panels.
"""

from .combine import cauchy_combine, min_p_combine
from .diagnostics import DiagnosticsReport, box_pierce, residual_diagnostics
from .dgp import (
    AlphaSpec,
    Dependence,
    DgpConfig,
    Innovation,
    SimulatedPanel,
    build_band_matrices,
    generate_panel,
    simulate_alphas,
    simulate_betas,
    simulate_errors,
    simulate_factors,
)
from .estimator import AlphaTest
from .exceptions import (
    AlphaTestError,
    DataFormatError,
    DegenerateEstimateError,
    StudyError,
)
from .kernels import (
    RngStream,
    cauchy_cdf,
    chi_square_sf,
    gumbel_limit_cdf,
    gumbel_limit_quantile,
    gumbel_limit_sf,
    normal_cdf,
    normal_sf,
    sample_normal,
    sample_student_t,
)
from .maxtest import MaxTestInternals, longrun_variance, max_test, max_test_internals
from .outcomes import TestOutcome
from .panel import PanelData
from .panel_io import StudySpec, load_panel, load_study_config, save_study_config, write_panel
from .regression import FactorFit, default_bandwidth, fit_factor_model, projection_weights
from .rolling import RollingReport, rolling_test
from .study import RepRecord, StudyResult, power_profile, run_study
from .sumtest import (
    SumTestInternals,
    autocov_product_trace,
    autocov_trace,
    null_mean,
    null_variance,
    sum_test,
    sum_test_internals,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaSpec",
    "AlphaTest",
    "AlphaTestError",
    "DataFormatError",
    "DegenerateEstimateError",
    "Dependence",
    "DgpConfig",
    "DiagnosticsReport",
    "FactorFit",
    "Innovation",
    "MaxTestInternals",
    "PanelData",
    "RepRecord",
    "RngStream",
    "RollingReport",
    "SimulatedPanel",
    "StudyError",
    "StudyResult",
    "StudySpec",
    "SumTestInternals",
    "TestOutcome",
    "autocov_product_trace",
    "autocov_trace",
    "box_pierce",
    "build_band_matrices",
    "cauchy_cdf",
    "cauchy_combine",
    "chi_square_sf",
    "default_bandwidth",
    "fit_factor_model",
    "generate_panel",
    "gumbel_limit_cdf",
    "gumbel_limit_quantile",
    "gumbel_limit_sf",
    "longrun_variance",
    "load_panel",
    "load_study_config",
    "max_test",
    "max_test_internals",
    "min_p_combine",
    "normal_cdf",
    "normal_sf",
    "null_mean",
    "null_variance",
    "power_profile",
    "projection_weights",
    "residual_diagnostics",
    "rolling_test",
    "run_study",
    "sample_normal",
    "save_study_config",
    "sample_student_t",
    "simulate_alphas",
    "simulate_betas",
    "simulate_errors",
    "simulate_factors",
    "sum_test",
    "sum_test_internals",
    "write_panel",
]
