"""Reading and writing track files and per-step metric results.

Track files hold one row per (time, id) with a fixed-width state vector.
The CSV grammar is a header ``t,id,x0,...,x{d-1}`` followed by data rows;
lines starting with ``#`` are comments. The JSON form is an array of objects
with the same field names. Float fields are serialized with 17 significant
digits, which makes the write/read round trip exact.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .core import PointSet
from .metrics import StepResult

RESULT_COLUMNS = (
    "time", "metric", "total", "localization", "outline", "cardinality",
    "n_truth", "n_est", "n_correct", "n_outline", "n_missing", "n_false",
)

_FORMATS = ("csv", "json")


class TrackFormatError(ValueError):
    """A track file failed to parse; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class TrackRecord(NamedTuple):
    time: int
    id: str
    state: tuple[float, ...]


@dataclass(frozen=True)
class TrackFile:
    """Parsed track rows plus the state dimension they share."""

    records: tuple[TrackRecord, ...]
    dim: int

    def times(self) -> list[int]:
        return sorted({rec.time for rec in self.records})

    def point_sets(self) -> dict[int, PointSet]:
        """Group rows by time into point sets (file row order within a step)."""
        buckets: dict[int, list[tuple[float, ...]]] = {}
        for rec in self.records:
            buckets.setdefault(rec.time, []).append(rec.state)
        return {
            t: PointSet(np.array(states, dtype=float).reshape(len(states), self.dim), dim=self.dim)
            for t, states in buckets.items()
        }

    def ids(self) -> dict[int, tuple[str, ...]]:
        """Track ids per time, parallel to the point set rows."""
        buckets: dict[int, list[str]] = {}
        for rec in self.records:
            buckets.setdefault(rec.time, []).append(rec.id)
        return {t: tuple(names) for t, names in buckets.items()}


def _check_format(format: str) -> None:
    if format not in _FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {_FORMATS}")


def _read_text(source) -> str:
    if hasattr(source, "read"):
        data = source.read()
        return data.decode("utf-8") if isinstance(data, bytes) else data
    with open(source, "r", encoding="utf-8") as handle:
        return handle.read()


def _parse_float(token: str, what: str, line: int | None) -> float:
    try:
        value = float(token)
    except ValueError:
        raise TrackFormatError(f"{what} is not a number: {token!r}", line) from None
    if not math.isfinite(value):
        raise TrackFormatError(f"{what} must be finite, got {token!r}", line)
    return value


def _header_names(dim: int) -> list[str]:
    return ["t", "id"] + [f"x{i}" for i in range(dim)]


def _parse_track_csv(text: str) -> TrackFile:
    records: list[TrackRecord] = []
    seen: set[tuple[int, str]] = set()
    dim: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        row = [cell.strip() for cell in next(csv.reader([raw]))]
        if dim is None:
            width = len(row) - 2
            if width < 1 or row != _header_names(width):
                raise TrackFormatError(
                    f"malformed header {row!r}; expected t,id,x0,...", lineno)
            dim = width
            continue
        if len(row) != dim + 2:
            raise TrackFormatError(
                f"expected {dim + 2} fields (t, id and {dim} state values), got {len(row)}", lineno)
        try:
            time = int(row[0])
        except ValueError:
            raise TrackFormatError(f"time is not an integer: {row[0]!r}", lineno) from None
        track_id = row[1]
        if not track_id:
            raise TrackFormatError("track id must not be empty", lineno)
        state = tuple(_parse_float(tok, f"state value x{k}", lineno) for k, tok in enumerate(row[2:]))
        key = (time, track_id)
        if key in seen:
            raise TrackFormatError(f"duplicate (time, id) pair {key!r}", lineno)
        seen.add(key)
        records.append(TrackRecord(time, track_id, state))
    if dim is None:
        raise TrackFormatError("missing header row; expected t,id,x0,...")
    return TrackFile(tuple(records), dim)


def _parse_track_json(text: str) -> TrackFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TrackFormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(data, list):
        raise TrackFormatError("track JSON must be an array of row objects")
    records: list[TrackRecord] = []
    seen: set[tuple[int, str]] = set()
    dim: int | None = None
    for index, obj in enumerate(data, start=1):
        where = f"record {index}"
        if not isinstance(obj, dict):
            raise TrackFormatError(f"{where}: expected an object, got {type(obj).__name__}")
        if dim is None:
            dim = sum(1 for key in obj if key.startswith("x") and key[1:].isdigit())
            if dim < 1:
                raise TrackFormatError(f"{where}: no state fields x0,... found")
        expected = set(_header_names(dim))
        if set(obj) != expected:
            raise TrackFormatError(f"{where}: fields {sorted(obj)} do not match {sorted(expected)}")
        if not isinstance(obj["t"], int) or isinstance(obj["t"], bool):
            raise TrackFormatError(f"{where}: time must be an integer, got {obj['t']!r}")
        if not isinstance(obj["id"], str) or not obj["id"]:
            raise TrackFormatError(f"{where}: id must be a non-empty string")
        state = []
        for k in range(dim):
            value = obj[f"x{k}"]
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise TrackFormatError(f"{where}: state value x{k} must be a finite number")
            state.append(float(value))
        key = (obj["t"], obj["id"])
        if key in seen:
            raise TrackFormatError(f"{where}: duplicate (time, id) pair {key!r}")
        seen.add(key)
        records.append(TrackRecord(obj["t"], obj["id"], tuple(state)))
    if dim is None:
        raise TrackFormatError("track JSON array is empty; cannot infer dimension")
    return TrackFile(tuple(records), dim)


def read_tracks(source, format: str = "csv") -> TrackFile:
    """Parse a track file from a path or file-like object.

    Args:
        source: path or readable text/byte stream.
        format: ``"csv"`` or ``"json"``.

    Raises:
        TrackFormatError: with the offending 1-based line number for CSV
            sources and the record index for JSON sources.
    """
    _check_format(format)
    text = _read_text(source)
    return _parse_track_csv(text) if format == "csv" else _parse_track_json(text)


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _records_from(series) -> tuple[tuple[TrackRecord, ...], int]:
    if isinstance(series, TrackFile):
        return tuple(sorted(series.records, key=lambda rec: rec.time)), series.dim
    dim = None
    records: list[TrackRecord] = []
    for t in sorted(series):
        point_set = series[t]
        if dim is None:
            dim = point_set.dim
        elif point_set.dim != dim:
            raise ValueError(f"series dimension changes at step {t}: {point_set.dim} != {dim}")
        for index, state in enumerate(point_set):
            records.append(TrackRecord(int(t), str(index), tuple(float(v) for v in state)))
    return tuple(records), dim if dim is not None else 1


def _open_sink(sink):
    if hasattr(sink, "write"):
        return sink, False
    return open(sink, "w", encoding="utf-8", newline=""), True


def write_tracks(series, sink, format: str = "csv") -> None:
    """Write a track series to a path or file-like object.

    Args:
        series: a ``TrackFile`` (ids preserved) or a mapping of time to
            ``PointSet`` (ids become the row index within each step).
        sink: path or writable text stream.
        format: ``"csv"`` or ``"json"``.
    """
    _check_format(format)
    records, dim = _records_from(series)
    handle, owned = _open_sink(sink)
    try:
        if format == "csv":
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(_header_names(dim))
            for rec in records:
                writer.writerow([rec.time, rec.id] + [_fmt(v) for v in rec.state])
        else:
            rows = [
                {"t": rec.time, "id": rec.id, **{f"x{k}": v for k, v in enumerate(rec.state)}}
                for rec in records
            ]
            json.dump(rows, handle, indent=2)
            handle.write("\n")
    finally:
        if owned:
            handle.close()


def _result_rows(steps: Iterable[StepResult]) -> list[dict]:
    rows: list[dict] = []
    for step in steps:
        report = step.association
        for metric, result in step.results.items():
            rows.append({
                "time": step.time,
                "metric": metric,
                "total": result.total,
                "localization": result.localization,
                "outline": result.outline,
                "cardinality": result.cardinality,
                "n_truth": step.n_truth,
                "n_est": step.n_estimate,
                "n_correct": len(report.correct_pairs),
                "n_outline": len(report.outline_pairs),
                "n_missing": len(report.missing),
                "n_false": len(report.false_targets),
            })
    return rows


def write_results(steps: Iterable[StepResult], sink, format: str = "csv") -> None:
    """Write per-step metric results as one row per (time, metric).

    The CSV column order is fixed (``RESULT_COLUMNS``) and float fields carry
    17 significant digits; the JSON form is an array of objects with the same
    field names.
    """
    _check_format(format)
    rows = _result_rows(steps)
    handle, owned = _open_sink(sink)
    try:
        if format == "csv":
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(RESULT_COLUMNS)
            for row in rows:
                writer.writerow([
                    row["time"], row["metric"],
                    _fmt(row["total"]), _fmt(row["localization"]),
                    _fmt(row["outline"]), _fmt(row["cardinality"]),
                    row["n_truth"], row["n_est"], row["n_correct"],
                    row["n_outline"], row["n_missing"], row["n_false"],
                ])
        else:
            json.dump(rows, handle, indent=2)
            handle.write("\n")
    finally:
        if owned:
            handle.close()
