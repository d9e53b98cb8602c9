"""Synthetic dependent panels for size and power studies.

Three factor paths follow AR recursions with GARCH-type conditional
variances; loadings are uniform draws; idiosyncratic errors come from a
banded moving-average filter over cross-sectionally correlated shocks;
intercept alternatives are sparse uniform draws. Every output is fully
determined by a seed and stream id.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

import numpy as np

from .exceptions import DataFormatError, DegenerateEstimateError
from .kernels import RngStream
from .panel import PanelData

# AR intercept/slope and conditional-variance recursions per factor:
# market, size spread, value spread.
FACTOR_AR = ((0.53, 0.06), (0.19, 0.19), (0.19, 0.05))
FACTOR_GARCH = ((0.89, 0.85, 0.11), (0.62, 0.74, 0.19), (0.80, 0.76, 0.15))
BETA_RANGES = ((0.2, 2.0), (-1.0, 1.5), (-1.5, 1.5))
BURN_IN = 50

# scalar tail filters e^(-2h) fall below double-precision relevance here
_MAX_TAIL_LAG = 13


class Dependence(Enum):
    """Serial dependence of the error filter: none, order two, or geometric tail."""

    INDEPENDENT = "independent"
    M_DEPENDENT = "m2"
    INFINITE = "infinite"

    def order(self, n_periods):
        if self is Dependence.INDEPENDENT:
            return 0
        if self is Dependence.M_DEPENDENT:
            return 2
        return min(int(n_periods) - 1, _MAX_TAIL_LAG)


class Innovation(Enum):
    NORMAL = "normal"
    STUDENT_T3 = "t3"


# sparse-alternative scale constants per dependence mode, calibrated for
# comparable power across modes
DEFAULT_SPARSE_SCALE = {
    Dependence.INDEPENDENT: 12.0,
    Dependence.M_DEPENDENT: 80.0,
    Dependence.INFINITE: 90.0,
}


@dataclass(frozen=True)
class AlphaSpec:
    """Which intercept alternative to plant.

    ``kind`` is "null", "sparse_uniform" (s nonzero entries uniform on
    [0, sqrt(c log(N) / (s T))]), or "signal_strength" (s nonzero entries
    uniform on [0, sqrt(delta log(N) / T)]). The support is drawn uniformly
    without replacement.
    """

    kind: str = "null"
    s: int = 0
    c: float = None
    delta: float = None

    def __post_init__(self):
        if self.kind not in ("null", "sparse_uniform", "signal_strength"):
            raise DataFormatError(f"unknown alpha kind {self.kind!r}")
        if self.kind != "null" and self.s < 1:
            raise DataFormatError("alternative specs need s >= 1 nonzero alphas")
        if self.kind == "signal_strength" and self.delta is None:
            raise DataFormatError("signal_strength spec needs delta")

    @classmethod
    def null(cls):
        return cls(kind="null")

    @classmethod
    def sparse_uniform(cls, s, c=None):
        return cls(kind="sparse_uniform", s=int(s), c=c)

    @classmethod
    def signal_strength(cls, s, delta):
        return cls(kind="signal_strength", s=int(s), delta=float(delta))


@dataclass(frozen=True)
class DgpConfig:
    """Complete recipe for one synthetic panel."""

    n_securities: int
    n_periods: int
    dependence: Dependence = Dependence.INDEPENDENT
    innovation: Innovation = Innovation.NORMAL
    omega_band: float = 0.9
    phi1: float = 0.6
    phi2: float = 0.4
    alpha: AlphaSpec = AlphaSpec.null()
    seed: int = 0

    def __post_init__(self):
        if self.n_securities < 1 or self.n_periods < 1:
            raise DataFormatError("need at least one security and one period")
        if not 0.0 < self.omega_band <= 1.0:
            raise DataFormatError(f"omega_band must lie in (0, 1], got {self.omega_band}")
        if self.n_securities * self.omega_band < 1.0:
            raise DataFormatError("band width below one security")
        if self.alpha.kind != "null" and self.alpha.s > self.n_securities:
            raise DataFormatError(
                f"cannot place {self.alpha.s} nonzero alphas among {self.n_securities} securities"
            )

    def sparse_scale(self):
        """Scale constant for sparse alternatives, defaulting per dependence mode."""
        if self.alpha.c is not None:
            return float(self.alpha.c)
        return DEFAULT_SPARSE_SCALE[self.dependence]

    def with_alpha(self, alpha_spec):
        return replace(self, alpha=alpha_spec)

    def stream(self, stream_id=0):
        return RngStream(self.seed, stream_id)


def simulate_factors(n_periods, stream):
    """Three AR paths with GARCH-type conditional variances.

    Each path starts at zero level and unit conditional variance fifty
    periods before the sample and the burn-in is discarded.
    """
    n_periods = int(n_periods)
    if n_periods < 1:
        raise DataFormatError("need at least one period")
    out = np.empty((n_periods, 3))
    total = n_periods + BURN_IN + 1
    for j in range(3):
        ar_const, ar_slope = FACTOR_AR[j]
        v_const, v_persist, v_shock = FACTOR_GARCH[j]
        shocks = stream.normal(total)
        level = 0.0
        variance = 1.0
        for k in range(1, total):
            variance = v_const + v_persist * variance + v_shock * shocks[k - 1] ** 2
            level = ar_const + ar_slope * level + math.sqrt(variance) * shocks[k]
            if k > BURN_IN:
                out[k - BURN_IN - 1, j] = level
    return out


def simulate_betas(n_securities, stream):
    """Factor loadings drawn uniformly, column by column."""
    n_securities = int(n_securities)
    cols = [stream.uniform(lo, hi, n_securities) for lo, hi in BETA_RANGES]
    return np.column_stack(cols)


def build_band_matrices(n_securities, omega_band=0.9, phi1=0.6, phi2=0.4,
                        dependence=Dependence.M_DEPENDENT):
    """Cross-sectional covariance, its Cholesky factor, and the MA filters.

    The covariance has unit diagonal and inverse-square-decay entries
    inside the band; the lag-1 and lag-2 filters share that band profile
    scaled by phi1/h; beyond lag two (infinite mode only) the filters are
    scalar multiples e^(-2h) of the identity, returned as plain floats.
    Returns ``(sigma, filters, chol)``.
    """
    n = int(n_securities)
    gap = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    in_band = (gap >= 1) & (gap <= omega_band * n)
    decay = np.zeros((n, n))
    decay[in_band] = 1.0 / gap[in_band] ** 2
    sigma = np.eye(n) + phi2 * decay
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        smallest = float(np.linalg.eigvalsh(sigma)[0])
        raise DegenerateEstimateError(
            f"error covariance is not positive definite (smallest eigenvalue {smallest:.3e})",
            value=smallest,
        ) from None
    filters = [1.0]
    order = dependence.order(_MAX_TAIL_LAG + 1)
    if order >= 1:
        profile = np.eye(n) + decay
        filters.append(phi1 * profile)
        if order >= 2:
            filters.append((phi1 / 2.0) * profile)
        for h in range(3, order + 1):
            filters.append(math.exp(-2.0 * h))
    for arr in (sigma, chol):
        arr.setflags(write=False)
    return sigma, filters, chol


@lru_cache(maxsize=8)
def _band_system(n_securities, omega_band, phi1, phi2, dependence_value):
    return build_band_matrices(
        n_securities, omega_band, phi1, phi2, Dependence(dependence_value)
    )


def simulate_errors(config, stream):
    """Dependent error panel from the banded moving-average filter.

    Pre-sample shocks are generated so every retained period uses the full
    filter depth.
    """
    t, n = config.n_periods, config.n_securities
    _, filters, chol = _band_system(
        n, config.omega_band, config.phi1, config.phi2, config.dependence.value
    )
    order = min(len(filters) - 1, config.dependence.order(t))
    if config.innovation is Innovation.NORMAL:
        shocks = stream.normal((t + order, n))
    else:
        shocks = stream.student_t(3, (t + order, n))
    base = shocks @ chol.T
    errors = base[order:].copy()
    for h in range(1, order + 1):
        window = base[order - h : order - h + t]
        filt = filters[h]
        if isinstance(filt, float):
            errors += filt * window
        else:
            errors += window @ filt.T
    return errors


def simulate_alphas(n_securities, n_periods, alpha_spec, stream, scale=None):
    """Sparse intercept vector per the alternative spec.

    ``scale`` is the sparse-uniform constant; it defaults to the
    independent-mode value when not supplied.
    """
    n = int(n_securities)
    alphas = np.zeros(n)
    if alpha_spec.kind == "null":
        return alphas
    s = alpha_spec.s
    if s > n:
        raise DataFormatError(f"cannot place {s} nonzero alphas among {n} securities")
    support = stream.choice_without_replacement(n, s)
    log_n = math.log(n)
    if alpha_spec.kind == "sparse_uniform":
        if scale is None:
            scale = alpha_spec.c if alpha_spec.c is not None else DEFAULT_SPARSE_SCALE[Dependence.INDEPENDENT]
        bound = math.sqrt(scale * log_n / (s * n_periods))
    else:
        bound = math.sqrt(alpha_spec.delta * log_n / n_periods)
    alphas[support] = stream.uniform(0.0, bound, s)
    return alphas


@dataclass(frozen=True)
class SimulatedPanel:
    """A generated panel plus the ground truth used to build it."""

    panel: PanelData
    alphas: np.ndarray
    betas: np.ndarray


def generate_panel(config, stream=None):
    """Assemble returns from factors, loadings, errors, and planted alphas.

    The draw order (factors, betas, errors, alphas) is fixed, so panels
    generated from the same stream share everything except the intercepts
    across different alpha specs.
    """
    if stream is None:
        stream = config.stream()
    factors = simulate_factors(config.n_periods, stream)
    betas = simulate_betas(config.n_securities, stream)
    errors = simulate_errors(config, stream)
    alphas = simulate_alphas(
        config.n_securities, config.n_periods, config.alpha, stream,
        scale=config.sparse_scale(),
    )
    returns = alphas[None, :] + factors @ betas.T + errors
    panel = PanelData(returns=returns, factors=factors)
    return SimulatedPanel(panel=panel, alphas=alphas, betas=betas)
