"""Panel container for excess returns and observed factors."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DataFormatError
from .validation import as_float_matrix, default_labels


@dataclass(frozen=True)
class PanelData:
    """Observed excess returns and factor realizations on a common clock.

    ``returns`` is T x N (time by security, in excess-return units) and
    ``factors`` is T x p. Requires T >= p + 2 and at least one security;
    entries must be finite. Label lists default to generated ids.
    """

    returns: np.ndarray
    factors: np.ndarray
    security_ids: list = field(default=None)
    time_ids: list = field(default=None)

    def __post_init__(self):
        returns = as_float_matrix(self.returns, "returns")
        factors = as_float_matrix(self.factors, "factors")
        object.__setattr__(self, "returns", returns)
        object.__setattr__(self, "factors", factors)
        t, n = returns.shape
        if factors.shape[0] != t:
            raise DataFormatError(
                f"returns and factors disagree on the number of periods: {t} != {factors.shape[0]}"
            )
        p = factors.shape[1]
        if t < p + 2:
            raise DataFormatError(f"need at least p + 2 = {p + 2} periods, got {t}")
        if n < 1:
            raise DataFormatError("need at least one security")
        if self.security_ids is None:
            object.__setattr__(self, "security_ids", default_labels(n, "sec"))
        elif len(self.security_ids) != n:
            raise DataFormatError(f"{len(self.security_ids)} security ids for {n} securities")
        elif len(set(self.security_ids)) != n:
            raise DataFormatError("duplicate security ids")
        if self.time_ids is None:
            object.__setattr__(self, "time_ids", default_labels(t, "t"))
        elif len(self.time_ids) != t:
            raise DataFormatError(f"{len(self.time_ids)} time ids for {t} periods")

    @property
    def n_periods(self):
        return self.returns.shape[0]

    @property
    def n_securities(self):
        return self.returns.shape[1]

    @property
    def n_factors(self):
        return self.factors.shape[1]

    def window(self, start, length):
        """Contiguous sub-panel of ``length`` periods beginning at ``start``."""
        stop = start + length
        if start < 0 or stop > self.n_periods:
            raise DataFormatError(f"window [{start}, {stop}) outside panel of {self.n_periods} periods")
        return PanelData(
            returns=self.returns[start:stop],
            factors=self.factors[start:stop],
            security_ids=self.security_ids,
            time_ids=self.time_ids[start:stop],
        )
