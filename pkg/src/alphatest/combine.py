"""P-value combiners for the sum and max tests.

The Cauchy combination maps each p-value through a tangent transform whose
equal-weight average is standard Cauchy under independence, a rule that is
also remarkably insensitive to dependence between the inputs. The minimal
p-value rule with its exact two-test adjustment is kept as a baseline.
"""

import math

from .exceptions import DataFormatError
from .kernels import cauchy_sf
from .outcomes import TestOutcome
from .validation import check_probability

_CLIP = 1e-15


def cauchy_combine(p_max, p_sum):
    """Cauchy combination of two p-values with equal weights.

    Inputs equal to exactly 0 or 1 are clipped just inside (0, 1) so the
    tangent transform stays finite in double precision.
    """
    p_max = check_probability(p_max, "p_max")
    p_sum = check_probability(p_sum, "p_sum")
    p_max = min(max(p_max, _CLIP), 1.0 - _CLIP)
    p_sum = min(max(p_sum, _CLIP), 1.0 - _CLIP)
    statistic = 0.5 * math.tan((0.5 - p_max) * math.pi) + 0.5 * math.tan((0.5 - p_sum) * math.pi)
    if not math.isfinite(statistic):
        raise DataFormatError(f"non-finite combination statistic from ({p_max}, {p_sum})")
    return TestOutcome(method="cc", statistic=statistic, p_value=cauchy_sf(statistic))


def min_p_combine(p_max, p_sum):
    """Minimal p-value combination, adjusted for taking the better of two.

    Returns 1 - (1 - min_p)^2, so rejecting when the result is at most
    gamma matches the exact two-test threshold min_p <= 1 - sqrt(1 - gamma).
    """
    p_max = check_probability(p_max, "p_max")
    p_sum = check_probability(p_sum, "p_sum")
    smallest = min(p_max, p_sum)
    adjusted = smallest * (2.0 - smallest)
    return TestOutcome(method="min_p", statistic=smallest, p_value=adjusted)
