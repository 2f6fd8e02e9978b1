"""CSV interchange for series, Pickands curves, reference curves, and metrics.

All writers emit LF line endings and a ``# key=value`` provenance header,
and format floats with ``repr`` (shortest round-trip), so identical inputs
produce byte-identical files.  Readers tolerate comment lines, an optional
header row, and CRLF endings, and reject NaN/inf or malformed rows with
the offending line number.
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Mapping

import numpy as np

from .blocks import BlockScheme
from .dgp import BivariateSeries
from .errors import DataError
from .madogram import PickandsCurve

__all__ = [
    "write_series_csv",
    "read_series_csv",
    "write_curve_csv",
    "read_curve_csv",
    "write_metrics_csv",
    "read_metrics_csv",
    "write_summary_curve_csv",
]


def _fmt(x: float) -> str:
    return repr(float(x))


def _provenance_lines(fmt: str, provenance: Mapping[str, str]) -> list[str]:
    lines = [f"# format=potmado/{fmt}"]
    for key, value in provenance.items():
        lines.append(f"# {key}={value}")
    return lines


def _write_lines(path, lines) -> Path:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc
    return path


def _read_text(path) -> str:
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise DataError(f"input file not found: {path}") from exc
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def _parse_table(path, text: str):
    """Split CSV text into (provenance dict, list of (lineno, fields))."""
    provenance: dict[str, str] = {}
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, _, value = body.partition("=")
                provenance[key.strip()] = value.strip()
            continue
        rows.append((lineno, [field.strip() for field in line.split(",")]))
    return provenance, rows


def _is_numeric_row(fields: list[str]) -> bool:
    try:
        for field in fields:
            float(field)
    except ValueError:
        return False
    return True


def _numeric_rows(path, rows, n_columns):
    """Parse data rows with a fixed column count, skipping one leading header row."""
    if rows and not _is_numeric_row(rows[0][1]):
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")
    allowed = (n_columns,) if isinstance(n_columns, int) else tuple(n_columns)
    width = len(rows[0][1])
    if width not in allowed:
        expected = " or ".join(str(k) for k in allowed)
        raise DataError(f"{path}: row {rows[0][0]}: expected {expected} columns, found {width}")
    out = np.empty((len(rows), width))
    for i, (lineno, fields) in enumerate(rows):
        if len(fields) != width:
            raise DataError(f"{path}: row {lineno}: expected {width} columns, found {len(fields)}")
        for j, field in enumerate(fields):
            try:
                value = float(field)
            except ValueError as exc:
                raise DataError(f"{path}: row {lineno}: non-numeric value {field!r}") from exc
            if not np.isfinite(value):
                raise DataError(f"{path}: row {lineno}: non-finite value {field!r}")
            out[i, j] = value
    return out


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------


def write_series_csv(path, series: BivariateSeries, provenance: Mapping[str, str] | None = None):
    lines = _provenance_lines("series", provenance or {})
    lines.append("x1,x2")
    for x1, x2 in series.observations:
        lines.append(f"{_fmt(x1)},{_fmt(x2)}")
    return _write_lines(path, lines)


def read_series_csv(path) -> BivariateSeries:
    text = _read_text(path)
    _, rows = _parse_table(path, text)
    data = _numeric_rows(path, rows, 2)
    return BivariateSeries(data)


# ---------------------------------------------------------------------------
# Pickands curves (estimated, theoretical, or reference with stderr)
# ---------------------------------------------------------------------------


def write_curve_csv(path, curve: PickandsCurve, provenance: Mapping[str, str] | None = None):
    meta = {
        "c": _fmt(curve.c),
        "m": str(curve.scheme.m) if curve.scheme is not None else "none",
        "scheme": curve.scheme.kind if curve.scheme is not None else "none",
        "corrected": "true" if curve.corrected else "false",
    }
    meta.update(provenance or {})
    lines = _provenance_lines("curve", meta)
    if curve.stderr is None:
        lines.append("t,value")
        for t, value in zip(curve.grid, curve.values):
            lines.append(f"{_fmt(t)},{_fmt(value)}")
    else:
        lines.append("t,value,stderr")
        for t, value, se in zip(curve.grid, curve.values, curve.stderr):
            lines.append(f"{_fmt(t)},{_fmt(value)},{_fmt(se)}")
    return _write_lines(path, lines)


def read_curve_csv(path) -> tuple[PickandsCurve, dict[str, str]]:
    text = _read_text(path)
    provenance, rows = _parse_table(path, text)
    data = _numeric_rows(path, rows, (2, 3))
    scheme = None
    if provenance.get("scheme", "none") != "none":
        try:
            scheme = BlockScheme(provenance["scheme"], int(provenance["m"]))
        except (KeyError, ValueError) as exc:
            raise DataError(f"{path}: malformed scheme metadata") from exc
    try:
        c = float(provenance.get("c", "1.0"))
    except ValueError as exc:
        raise DataError(f"{path}: malformed c metadata") from exc
    curve = PickandsCurve(
        grid=data[:, 0],
        values=data[:, 1],
        c=c,
        scheme=scheme,
        corrected=provenance.get("corrected", "false") == "true",
        stderr=data[:, 2] if data.shape[1] == 3 else None,
    )
    return curve, provenance


def write_summary_curve_csv(
    path, grid, mean, variance, provenance: Mapping[str, str] | None = None
):
    """Per-cell Monte Carlo summary: columns t, mean, variance."""
    lines = _provenance_lines("curve-summary", provenance or {})
    lines.append("t,mean,variance")
    for t, mu, var in zip(grid, mean, variance):
        lines.append(f"{_fmt(t)},{_fmt(mu)},{_fmt(var)}")
    return _write_lines(path, lines)


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

_METRICS_HEADER = "copula,scheme,c,m,B_sum,Var_sum,MSE_sum"


def write_metrics_csv(path, records, provenance: Mapping[str, str]):
    ordered = sorted(records, key=lambda r: (r.copula, r.scheme, r.c, r.m))
    lines = _provenance_lines("metrics", provenance)
    body = [_METRICS_HEADER]
    for r in ordered:
        body.append(
            f"{r.copula},{r.scheme},{_fmt(r.c)},{r.m},"
            f"{_fmt(r.B_sum)},{_fmt(r.Var_sum)},{_fmt(r.MSE_sum)}"
        )
    digest = hashlib.sha1("\n".join(lines + body).encode("utf-8")).hexdigest()[:12]
    lines.append(f"# build={digest}")
    return _write_lines(path, lines + body)


def read_metrics_csv(path):
    from .experiment import MetricsRecord

    text = _read_text(path)
    provenance, rows = _parse_table(path, text)
    if rows and rows[0][1] == _METRICS_HEADER.split(","):
        rows = rows[1:]
    if not rows:
        raise DataError(f"{path}: no data rows")
    records = []
    for lineno, fields in rows:
        if len(fields) != 7:
            raise DataError(f"{path}: row {lineno}: expected 7 columns, found {len(fields)}")
        try:
            records.append(
                MetricsRecord(
                    copula=fields[0],
                    scheme=fields[1],
                    c=float(fields[2]),
                    m=int(fields[3]),
                    B_sum=float(fields[4]),
                    Var_sum=float(fields[5]),
                    MSE_sum=float(fields[6]),
                )
            )
        except ValueError as exc:
            raise DataError(f"{path}: row {lineno}: {exc}") from exc
    return records, provenance
