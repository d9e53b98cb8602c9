"""Result container shared by all test procedures."""

import math
from dataclasses import dataclass

from .exceptions import DataFormatError


@dataclass(frozen=True)
class TestOutcome:
    """One test's statistic and p-value.

    ``adjusted`` is the location-scale adjusted value: the standardized
    statistic for the sum test, the centered statistic for the max test,
    and None for the p-value combiners.
    """

    method: str
    statistic: float
    p_value: float
    adjusted: float = None

    def __post_init__(self):
        if not math.isfinite(self.statistic):
            raise DataFormatError(f"non-finite statistic for method {self.method!r}")
        if self.adjusted is not None and not math.isfinite(self.adjusted):
            raise DataFormatError(f"non-finite adjusted statistic for method {self.method!r}")
        if not math.isfinite(self.p_value) or not 0.0 <= self.p_value <= 1.0:
            raise DataFormatError(f"p-value outside [0, 1] for method {self.method!r}: {self.p_value}")
