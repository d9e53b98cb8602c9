"""CSV panel ingestion, excess-return construction, and study config files.

Returns files carry a ``date`` column then one column per security id;
factor files carry ``date,mkt_rf,smb,hml,rf``. The two files must cover
exactly the same dates. Excess returns subtract the risk-free column from
every security; the market factor column is already in excess form.
Parsing is locale independent (decimal point only).
"""

import csv
from dataclasses import dataclass

import numpy as np

from .dgp import AlphaSpec, Dependence, DgpConfig, Innovation
from .exceptions import DataFormatError
from .panel import PanelData

FACTOR_HEADER = ("date", "mkt_rf", "smb", "hml", "rf")
FACTOR_NAMES = ("mkt_rf", "smb", "hml")


def _read_rows(path):
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataFormatError(f"{path} is empty")
    return rows


def _parse_cell(value, path, row, col):
    try:
        return float(value)
    except ValueError:
        raise DataFormatError(
            f"{path}: non-numeric cell at row {row}, column {col}: {value!r}"
        ) from None


def _parse_table(path, expected_header=None):
    rows = _read_rows(path)
    header = [h.strip() for h in rows[0]]
    if expected_header is not None and tuple(header) != expected_header:
        raise DataFormatError(
            f"{path}: expected header {','.join(expected_header)}, got {','.join(header)}"
        )
    if header[0] != "date":
        raise DataFormatError(f"{path}: first column must be 'date', got {header[0]!r}")
    dates, values = [], []
    for r, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise DataFormatError(f"{path}: row {r} has {len(row)} cells, expected {len(header)}")
        dates.append(row[0].strip())
        values.append([_parse_cell(cell, path, r, header[c + 1]) for c, cell in enumerate(row[1:])])
    if not dates:
        raise DataFormatError(f"{path}: no data rows")
    return header[1:], dates, np.array(values, dtype=float)


def load_panel(returns_path, factors_path):
    """Read a returns CSV and a factors CSV into an excess-return panel.

    Rows are aligned by date; any date present in one file but not the
    other is an error naming the first unmatched date. The output keeps
    the returns file's date order.
    """
    ids, r_dates, r_values = _parse_table(returns_path)
    if len(set(ids)) != len(ids):
        dupe = next(x for i, x in enumerate(ids) if x in ids[:i])
        raise DataFormatError(f"{returns_path}: duplicate security id {dupe!r}")
    _, f_dates, f_values = _parse_table(factors_path, expected_header=FACTOR_HEADER)
    r_set, f_set = set(r_dates), set(f_dates)
    if len(r_set) != len(r_dates):
        dupe = next(x for i, x in enumerate(r_dates) if x in r_dates[:i])
        raise DataFormatError(f"{returns_path}: duplicate date {dupe!r}")
    if len(f_set) != len(f_dates):
        dupe = next(x for i, x in enumerate(f_dates) if x in f_dates[:i])
        raise DataFormatError(f"{factors_path}: duplicate date {dupe!r}")
    if r_set != f_set:
        for d in r_dates:
            if d not in f_set:
                raise DataFormatError(f"unmatched date {d!r}: present in returns, missing from factors")
        for d in f_dates:
            if d not in r_set:
                raise DataFormatError(f"unmatched date {d!r}: present in factors, missing from returns")
    order = {d: k for k, d in enumerate(f_dates)}
    f_aligned = f_values[[order[d] for d in r_dates]]
    risk_free = f_aligned[:, 3]
    excess = r_values - risk_free[:, None]
    factors = f_aligned[:, :3]
    return PanelData(returns=excess, factors=factors, security_ids=list(ids), time_ids=list(r_dates))


def write_panel(panel, returns_path, factors_path):
    """Write a panel back to the two-file CSV layout.

    The returns file holds the excess returns as-is and the factors file
    sets the risk-free column to zero, so a round trip through
    :func:`load_panel` reproduces the panel exactly.
    """
    with open(returns_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["date", *panel.security_ids])
        for t, date in enumerate(panel.time_ids):
            writer.writerow([date, *(repr(float(v)) for v in panel.returns[t])])
    with open(factors_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(list(FACTOR_HEADER))
        for t, date in enumerate(panel.time_ids):
            writer.writerow([date, *(repr(float(v)) for v in panel.factors[t]), "0.0"])


@dataclass(frozen=True)
class StudySpec:
    """A DGP recipe plus the test-level settings read from a config file."""

    dgp: DgpConfig
    gamma: float = 0.05
    bandwidth: int = None


_DEPENDENCE_TOKENS = {d.value: d for d in Dependence}
_INNOVATION_TOKENS = {i.value: i for i in Innovation}


def save_study_config(spec, path):
    """Write a StudySpec back to the flat key=value format."""
    dgp = spec.dgp
    lines = [
        f"N={dgp.n_securities}",
        f"T={dgp.n_periods}",
        f"dependence={dgp.dependence.value}",
        f"innovation={dgp.innovation.value}",
        f"omega_band={dgp.omega_band!r}",
        f"phi1={dgp.phi1!r}",
        f"phi2={dgp.phi2!r}",
        f"alpha_kind={dgp.alpha.kind}",
    ]
    if dgp.alpha.kind != "null":
        lines.append(f"s={dgp.alpha.s}")
        if dgp.alpha.kind == "sparse_uniform":
            if dgp.alpha.c is not None:
                lines.append(f"c={dgp.alpha.c!r}")
        else:
            lines.append(f"delta={dgp.alpha.delta!r}")
    lines.append(f"gamma={spec.gamma!r}")
    if spec.bandwidth is not None:
        lines.append(f"bandwidth={spec.bandwidth}")
    lines.append(f"seed={dgp.seed}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def load_study_config(path):
    """Parse a flat key=value study config file.

    Keys: N, T, dependence (independent|m2|infinite), innovation
    (normal|t3), omega_band, phi1, phi2, alpha_kind (null|sparse_uniform|
    signal_strength), s, c or delta, gamma, bandwidth (optional), seed
    (optional). Lines starting with '#' are comments.
    """
    entries = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    for k, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataFormatError(f"{path}: line {k} is not key=value: {line!r}")
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()
    return _build_spec(entries, path)


def _require(entries, key, path):
    if key not in entries:
        raise DataFormatError(f"{path}: missing required key {key!r}")
    return entries[key]


def _build_spec(entries, path):
    def as_int(key, value):
        try:
            return int(value)
        except ValueError:
            raise DataFormatError(f"{path}: key {key!r} must be an integer, got {value!r}") from None

    def as_float(key, value):
        try:
            return float(value)
        except ValueError:
            raise DataFormatError(f"{path}: key {key!r} must be a number, got {value!r}") from None

    n = as_int("N", _require(entries, "N", path))
    t = as_int("T", _require(entries, "T", path))
    dep_token = entries.get("dependence", "independent")
    if dep_token not in _DEPENDENCE_TOKENS:
        raise DataFormatError(
            f"{path}: dependence must be one of {sorted(_DEPENDENCE_TOKENS)}, got {dep_token!r}"
        )
    innov_token = entries.get("innovation", "normal")
    if innov_token not in _INNOVATION_TOKENS:
        raise DataFormatError(
            f"{path}: innovation must be one of {sorted(_INNOVATION_TOKENS)}, got {innov_token!r}"
        )
    kind = entries.get("alpha_kind", "null")
    if kind == "null":
        alpha = AlphaSpec.null()
    elif kind == "sparse_uniform":
        alpha = AlphaSpec.sparse_uniform(
            as_int("s", _require(entries, "s", path)),
            as_float("c", entries["c"]) if "c" in entries else None,
        )
    elif kind == "signal_strength":
        alpha = AlphaSpec.signal_strength(
            as_int("s", _require(entries, "s", path)),
            as_float("delta", _require(entries, "delta", path)),
        )
    else:
        raise DataFormatError(
            f"{path}: alpha_kind must be null, sparse_uniform, or signal_strength, got {kind!r}"
        )
    config = DgpConfig(
        n_securities=n,
        n_periods=t,
        dependence=_DEPENDENCE_TOKENS[dep_token],
        innovation=_INNOVATION_TOKENS[innov_token],
        omega_band=as_float("omega_band", entries.get("omega_band", "0.9")),
        phi1=as_float("phi1", entries.get("phi1", "0.6")),
        phi2=as_float("phi2", entries.get("phi2", "0.4")),
        alpha=alpha,
        seed=as_int("seed", entries.get("seed", "0")),
    )
    return StudySpec(
        dgp=config,
        gamma=as_float("gamma", entries.get("gamma", "0.05")),
        bandwidth=as_int("bandwidth", entries["bandwidth"]) if "bandwidth" in entries else None,
    )
