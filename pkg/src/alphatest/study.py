"""Replicated size and power studies over synthetic panels.

Each replication gets its own counter-based random stream indexed by the
replication number, so results are bit-identical for any worker count and
any execution order. A failing replication aborts the whole study: quietly
dropping degenerate draws would bias the rejection rates.
"""

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

from .combine import cauchy_combine, min_p_combine
from .dgp import generate_panel, _band_system
from .exceptions import AlphaTestError, DataFormatError, StudyError
from .kernels import RngStream
from .maxtest import max_test
from .regression import default_bandwidth, fit_factor_model
from .sumtest import sum_test

METHODS = ("sum", "max", "cc", "min_p")

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "method", "reps", "rejections", "rate", "stderr",
    "gamma", "N", "T", "dependence", "innovation", "M",
)


class RepRecord(NamedTuple):
    """Raw per-replication test values."""

    replication: int
    z_sum: float
    centered_max: float
    p_sum: float
    p_max: float
    p_cc: float
    p_min_p: float


@dataclass(frozen=True)
class StudyResult:
    """Rejection-rate table for one configuration."""

    config: object
    bandwidth: int
    gamma: float
    reps: int
    methods: tuple
    rejections: dict
    raw: list = None

    @property
    def rates(self):
        return {m: self.rejections[m] / self.reps for m in self.methods}

    @property
    def stderrs(self):
        out = {}
        for m in self.methods:
            rate = self.rejections[m] / self.reps
            out[m] = math.sqrt(rate * (1.0 - rate) / self.reps)
        return out

    def to_csv(self):
        rows = [",".join(CSV_COLUMNS)]
        rates = self.rates
        stderrs = self.stderrs
        for m in self.methods:
            rows.append(",".join([
                m,
                str(self.reps),
                str(self.rejections[m]),
                repr(rates[m]),
                repr(stderrs[m]),
                repr(self.gamma),
                str(self.config.n_securities),
                str(self.config.n_periods),
                self.config.dependence.value,
                self.config.innovation.value,
                str(self.bandwidth),
            ]))
        return "\n".join(rows) + "\n"

    def to_json(self):
        rates = self.rates
        stderrs = self.stderrs
        payload = {
            "schema_version": SCHEMA_VERSION,
            "kind": "study_result",
            "gamma": self.gamma,
            "reps": self.reps,
            "bandwidth": self.bandwidth,
            "config": {
                "N": self.config.n_securities,
                "T": self.config.n_periods,
                "dependence": self.config.dependence.value,
                "innovation": self.config.innovation.value,
                "omega_band": self.config.omega_band,
                "phi1": self.config.phi1,
                "phi2": self.config.phi2,
                "alpha_kind": self.config.alpha.kind,
                "s": self.config.alpha.s,
                "c": self.config.alpha.c,
                "delta": self.config.alpha.delta,
                "seed": self.config.seed,
            },
            "methods": [
                {
                    "method": m,
                    "rejections": self.rejections[m],
                    "rate": rates[m],
                    "stderr": stderrs[m],
                }
                for m in self.methods
            ],
        }
        if self.raw is not None:
            payload["raw"] = [list(r) for r in self.raw]
        return json.dumps(payload, sort_keys=True)


def _replicate(config, bandwidth, base_seed, stream_offset, replication):
    stream = RngStream(base_seed, stream_offset + replication)
    sim = generate_panel(config, stream)
    fit = fit_factor_model(sim.panel)
    sum_outcome = sum_test(fit, bandwidth)
    max_outcome = max_test(fit, bandwidth)
    cc = cauchy_combine(max_outcome.p_value, sum_outcome.p_value)
    min_p = min_p_combine(max_outcome.p_value, sum_outcome.p_value)
    return RepRecord(
        replication=replication,
        z_sum=sum_outcome.adjusted,
        centered_max=max_outcome.adjusted,
        p_sum=sum_outcome.p_value,
        p_max=max_outcome.p_value,
        p_cc=cc.p_value,
        p_min_p=min_p.p_value,
    )


def _replicate_chunk(args):
    config, bandwidth, base_seed, stream_offset, start, stop = args
    records = []
    for r in range(start, stop):
        try:
            records.append(_replicate(config, bandwidth, base_seed, stream_offset, r))
        except AlphaTestError as exc:
            raise StudyError(
                f"replication {r} failed for config N={config.n_securities} "
                f"T={config.n_periods} dependence={config.dependence.value} "
                f"innovation={config.innovation.value} alpha={config.alpha.kind}: {exc}",
                replication=r,
            ) from exc
    return records


def run_study(config, methods=("sum", "max", "cc"), reps=1000, base_seed=None,
              gamma=0.05, bandwidth=None, workers=1, keep_raw=False,
              stream_offset=0):
    """Monte Carlo rejection rates for the requested methods.

    Replication ``r`` draws its panel from stream ``stream_offset + r`` of
    ``base_seed`` (defaulting to the config seed), is fitted, and is tested
    with the default bandwidth ceil(min(N, T)^(1/8)) unless ``bandwidth``
    overrides it. Results do not depend on ``workers``.
    """
    reps = int(reps)
    if reps < 1:
        raise DataFormatError("need at least one replication")
    for m in methods:
        if m not in METHODS:
            raise DataFormatError(f"unknown method {m!r}; choose from {METHODS}")
    if base_seed is None:
        base_seed = config.seed
    if bandwidth is None:
        bandwidth = default_bandwidth(config.n_securities, config.n_periods)
    bandwidth = int(bandwidth)
    # warm the band-matrix cache before any fork so workers share it
    _band_system(config.n_securities, config.omega_band, config.phi1,
                 config.phi2, config.dependence.value)
    workers = max(1, int(workers))
    if workers == 1:
        records = _replicate_chunk((config, bandwidth, base_seed, stream_offset, 0, reps))
    else:
        chunk = max(1, math.ceil(reps / (workers * 4)))
        tasks = [
            (config, bandwidth, base_seed, stream_offset, start, min(start + chunk, reps))
            for start in range(0, reps, chunk)
        ]
        records = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_replicate_chunk, tasks):
                records.extend(part)
        records.sort(key=lambda rec: rec.replication)
    p_fields = {"sum": "p_sum", "max": "p_max", "cc": "p_cc", "min_p": "p_min_p"}
    rejections = {
        m: sum(1 for rec in records if getattr(rec, p_fields[m]) <= gamma)
        for m in methods
    }
    return StudyResult(
        config=config,
        bandwidth=bandwidth,
        gamma=float(gamma),
        reps=reps,
        methods=tuple(methods),
        rejections=rejections,
        raw=records if keep_raw else None,
    )


def power_profile(config, reps, base_seed=None, sparsity_grid=None,
                  delta_grid=None, methods=("sum", "max", "cc"), gamma=0.05,
                  bandwidth=None, workers=1, keep_raw=False):
    """One study per grid point, sweeping sparsity or signal strength.

    Grid point ``g`` uses stream offset ``g * reps`` of the shared base
    seed, so panels differ across points while alternatives at the same
    point share their panel draws with the matching null.
    """
    if (sparsity_grid is None) == (delta_grid is None):
        raise DataFormatError("give exactly one of sparsity_grid or delta_grid")
    from .dgp import AlphaSpec

    if sparsity_grid is not None:
        specs = [AlphaSpec.sparse_uniform(s, config.alpha.c) for s in sparsity_grid]
    else:
        if config.alpha.s < 1:
            raise DataFormatError("delta_grid sweep needs a config with s >= 1")
        specs = [AlphaSpec.signal_strength(config.alpha.s, d) for d in delta_grid]
    results = []
    for g, spec in enumerate(specs):
        results.append(
            run_study(
                config.with_alpha(spec),
                methods=methods,
                reps=reps,
                base_seed=base_seed if base_seed is not None else config.seed,
                gamma=gamma,
                bandwidth=bandwidth,
                workers=workers,
                keep_raw=keep_raw,
                stream_offset=g * reps,
            )
        )
    return results
