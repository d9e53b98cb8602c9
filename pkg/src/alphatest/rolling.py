"""Rolling-window evaluation of the alpha tests over a long panel."""

import json
from dataclasses import dataclass
from typing import NamedTuple

from .combine import cauchy_combine
from .exceptions import AlphaTestError, DataFormatError
from .maxtest import max_test
from .regression import fit_factor_model
from .study import SCHEMA_VERSION
from .sumtest import sum_test


class RollingEntry(NamedTuple):
    window_start_id: str
    window_end_id: str
    p_sum: float
    p_max: float
    p_cc: float


@dataclass(frozen=True)
class RollingReport:
    """P-values of the three tests for every window slice, in order."""

    window_length: int
    step: int
    entries: list

    def to_csv(self):
        rows = ["window_start_id,window_end_id,p_sum,p_max,p_cc"]
        for e in self.entries:
            rows.append(
                f"{e.window_start_id},{e.window_end_id},"
                f"{e.p_sum!r},{e.p_max!r},{e.p_cc!r}"
            )
        return "\n".join(rows) + "\n"

    def to_json(self):
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "kind": "rolling_report",
                "window_length": self.window_length,
                "step": self.step,
                "entries": [e._asdict() for e in self.entries],
            },
            sort_keys=True,
        )


def rolling_test(panel, window=260, step=1, bandwidth=None):
    """Run the sum, max, and combination tests on every window slice.

    Produces floor((T - window) / step) + 1 chronological entries. Errors
    in a slice are reported with the window's starting time id.
    """
    window = int(window)
    step = int(step)
    if window < 1 or step < 1:
        raise DataFormatError("window and step must be positive")
    total = panel.n_periods
    if total < window:
        raise DataFormatError(f"panel has {total} periods, shorter than window {window}")
    entries = []
    for start in range(0, total - window + 1, step):
        piece = panel.window(start, window)
        start_id = piece.time_ids[0]
        end_id = piece.time_ids[-1]
        try:
            fit = fit_factor_model(piece)
            sum_outcome = sum_test(fit, bandwidth)
            max_outcome = max_test(fit, bandwidth)
        except AlphaTestError as exc:
            raise type(exc)(f"window starting at {start_id!r}: {exc}") from exc
        cc = cauchy_combine(max_outcome.p_value, sum_outcome.p_value)
        entries.append(
            RollingEntry(
                window_start_id=start_id,
                window_end_id=end_id,
                p_sum=sum_outcome.p_value,
                p_max=max_outcome.p_value,
                p_cc=cc.p_value,
            )
        )
    return RollingReport(window_length=window, step=step, entries=entries)
