"""Distribution and sampling kernels.

Self-contained special functions used by the tests (standard normal CDF,
the Gumbel-type limit law of the max statistic, the standard Cauchy CDF,
the chi-square upper tail) plus reproducible random streams for the
simulation machinery.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DataFormatError

_SQRT2 = math.sqrt(2.0)
_SQRT_PI = math.sqrt(math.pi)


def normal_cdf(x):
    """Standard normal CDF, evaluated through the complementary error function."""
    return 0.5 * math.erfc(-float(x) / _SQRT2)


def normal_sf(x):
    """Upper tail 1 - normal_cdf(x), accurate for large x."""
    return 0.5 * math.erfc(float(x) / _SQRT2)


def gumbel_limit_cdf(x):
    """CDF of the limit law of the centered max statistic: exp(-exp(-x/2)/sqrt(pi))."""
    return math.exp(-math.exp(-float(x) / 2.0) / _SQRT_PI)


def gumbel_limit_sf(x):
    """Upper tail 1 - gumbel_limit_cdf(x), accurate when the CDF is near one."""
    return -math.expm1(-math.exp(-float(x) / 2.0) / _SQRT_PI)


def gumbel_limit_quantile(gamma):
    """Value q with gumbel_limit_cdf(q) = 1 - gamma, for gamma in (0, 1)."""
    gamma = float(gamma)
    if not 0.0 < gamma < 1.0:
        raise DataFormatError(f"gamma must lie in (0, 1), got {gamma}")
    # F(q) = 1 - gamma  <=>  q = -log(pi) - 2 log(-log(1 - gamma))
    return -math.log(math.pi) - 2.0 * math.log(-math.log1p(-gamma))


def cauchy_cdf(x):
    """Standard Cauchy CDF, 1/2 + arctan(x)/pi."""
    return 0.5 + math.atan(float(x)) / math.pi


def cauchy_sf(x):
    """Upper tail of the standard Cauchy law, accurate in both tails."""
    x = float(x)
    if x > 1.0:
        return math.atan(1.0 / x) / math.pi
    if x < -1.0:
        return 1.0 - math.atan(-1.0 / x) / math.pi
    return 0.5 - math.atan(x) / math.pi


def chi_square_sf(q, df):
    """Upper tail of the chi-square law with integer ``df`` degrees of freedom.

    Evaluated through the regularized upper incomplete gamma function,
    specialised to half-integer shape: a finite Poisson-type series for
    even ``df`` and an erfc term plus a finite series for odd ``df``.
    Absolute error is well below 1e-10.
    """
    df = int(df)
    if df < 1:
        raise DataFormatError(f"degrees of freedom must be a positive integer, got {df}")
    q = float(q)
    if q < 0:
        raise DataFormatError(f"chi-square quantile must be non-negative, got {q}")
    if q == 0.0:
        return 1.0
    x = q / 2.0
    if df % 2 == 0:
        # sf = exp(-x) * sum_{j<df/2} x^j / j!
        term = 1.0
        total = 1.0
        for j in range(1, df // 2):
            term *= x / j
            total += term
        return min(1.0, math.exp(-x) * total)
    # odd df: start from sf(1 df) = erfc(sqrt(x)) and climb the shape recurrence
    total = math.erfc(math.sqrt(x))
    log_x = math.log(x)
    for k in range(df // 2):
        a = k + 0.5
        total += math.exp(a * log_x - x - math.lgamma(a + 1.0))
    return min(1.0, total)


@dataclass
class RngStream:
    """Counter-based random stream addressed by (seed, stream_id).

    Identical (seed, stream_id) pairs reproduce the identical sequence on
    every platform and under any thread count; distinct stream ids give
    statistically independent streams. A single stream is stateful and must
    not be shared across threads.
    """

    seed: int
    stream_id: int = 0
    _generator: np.random.Generator = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.seed < 0 or self.stream_id < 0:
            raise DataFormatError("seed and stream_id must be non-negative integers")

    @property
    def generator(self):
        if self._generator is None:
            key = np.array([self.seed, self.stream_id], dtype=np.uint64)
            self._generator = np.random.Generator(np.random.Philox(key=key))
        return self._generator

    def normal(self, size=None):
        return self.generator.standard_normal(size)

    def student_t(self, df=3, size=None):
        return self.generator.standard_t(df, size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self.generator.uniform(low, high, size)

    def choice_without_replacement(self, n, k):
        return self.generator.choice(n, size=k, replace=False)


def sample_normal(stream, size=None):
    """Draw from N(0, 1); a scalar when ``size`` is None."""
    return stream.normal(size)


def sample_student_t(stream, df=3, size=None):
    """Draw from Student's t with ``df`` degrees of freedom, unscaled.

    The draws are deliberately not standardised to unit variance; t(3)
    has variance 3.
    """
    return stream.student_t(df, size)
