"""Trajectory data model, raw-fix parsing, and the cleaning pipeline.

A trajectory is a time-ordered list of GPS fixes. Cleaning removes fixes with
unusable accuracy, collapses runs of bit-identical coordinates, marks
missing-data gaps as segment breaks, and attributes a dwell duration to every
fix so that downstream temporal statistics never accumulate time across holes
in the recording.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterable, Iterator

from .geo import GeoPoint

#: seconds of silence after which the recording is considered interrupted
DEFAULT_GAP_THRESHOLD_S = 1800
#: fixes reporting a radius above this (or exactly 0, a known bogus value) are dropped
DEFAULT_MAX_ACCURACY_M = 1000.0

SECONDS_PER_DAY = 86400


class DataError(ValueError):
    """Raised for malformed input data (streams, schemas, file contents)."""


@dataclass(frozen=True)
class Fix:
    """One GPS observation.

    duration is the dwell attributed to the fix by preprocessing, in seconds;
    it is 0.0 for freshly parsed fixes.
    """

    timestamp: int
    lat: float
    lon: float
    accuracy: float
    duration: float = 0.0

    @property
    def point(self) -> GeoPoint:
        return GeoPoint(self.lat, self.lon)


def day_index(timestamp: int, day_offset_min: int = 0) -> int:
    """Calendar-day bucket of a timestamp under a configurable day boundary.

    The offset shifts the day boundary (in minutes) so that, e.g., activity up
    to 3 am can be counted with the preceding day.
    """
    return (timestamp + day_offset_min * 60) // SECONDS_PER_DAY


@dataclass(frozen=True)
class Trajectory:
    """A user's time-ordered fixes plus bookkeeping from preprocessing.

    segment_breaks holds indices of fixes preceded by a missing-data gap;
    a stay cannot extend across such an index. processed marks the output of
    :func:`preprocess`, which is a no-op on already-processed input.
    """

    user_id: str
    fixes: tuple[Fix, ...]
    day_offset_min: int = 0
    segment_breaks: frozenset[int] = field(default_factory=frozenset)
    processed: bool = False

    def __len__(self) -> int:
        return len(self.fixes)

    @property
    def observation_days(self) -> int:
        """Number of distinct calendar days with at least one fix."""
        return len({day_index(f.timestamp, self.day_offset_min) for f in self.fixes})

    def day_indices(self) -> list[int]:
        return [day_index(f.timestamp, self.day_offset_min) for f in self.fixes]


@dataclass(frozen=True)
class ColumnSchema:
    """Maps input-file column names onto the fields of a Fix.

    accuracy_col may be None for datasets without an accuracy estimate; such
    fixes get accuracy 1.0 m and are never dropped by the accuracy filter.
    """

    time_col: str = "timestamp"
    lat_col: str = "lat"
    lon_col: str = "lon"
    accuracy_col: str | None = "accuracy"


@dataclass
class ParseReport:
    """Counts of rows discarded while reading an input file."""

    rows_total: int = 0
    rows_kept: int = 0
    rows_bad_value: int = 0
    rows_duplicate_ts: int = 0


@dataclass
class CleanReport:
    """Audit trail of the cleaning pipeline. Every removed fix has exactly one reason."""

    input_fixes: int = 0
    output_fixes: int = 0
    removed_accuracy_above_max: int = 0
    removed_accuracy_zero: int = 0
    removed_duplicate_coordinate: int = 0
    segment_breaks: int = 0
    median_interval_s: float = 0.0

    @property
    def removed_total(self) -> int:
        return (
            self.removed_accuracy_above_max
            + self.removed_accuracy_zero
            + self.removed_duplicate_coordinate
        )


def _parse_timestamp(raw: str) -> int:
    """Epoch seconds from either an integer/float literal or ISO-8601 text."""
    raw = raw.strip()
    try:
        return int(float(raw))
    except ValueError:
        pass
    text = raw.replace("Z", "+00:00") if raw.endswith("Z") else raw
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def _sniff_delimiter(header_line: str) -> str:
    return "\t" if "\t" in header_line else ","


def parse_fixes(
    source: str | Path | IO[str],
    schema: ColumnSchema = ColumnSchema(),
    user_id: str = "",
) -> tuple[Trajectory, ParseReport]:
    """Read raw fixes from delimiter-separated text with a header row.

    Timestamps may be epoch seconds or ISO-8601 (naive values are taken as
    UTC). Rows whose mapped fields fail to parse are counted and skipped; rows
    repeating an already-seen timestamp keep the first occurrence. The output
    is sorted by timestamp and has duration 0 on every fix.

    Parameters
    ----------
    source : path or open text stream
    schema : ColumnSchema
        Column names for timestamp/lat/lon/accuracy.
    user_id : str
        Identifier stored on the trajectory; defaults to the file stem when a
        path is given.

    Returns
    -------
    (Trajectory, ParseReport)

    Raises
    ------
    DataError
        If the stream is unreadable, has no header, or lacks a mapped column.
    """
    close_after = False
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not user_id:
            user_id = path.stem
        try:
            stream: IO[str] = open(path, "r", newline="")
        except OSError as exc:
            raise DataError(f"cannot read {path}: {exc}") from exc
        close_after = True
    else:
        stream = source

    try:
        header_line = stream.readline()
        if not header_line:
            raise DataError("input is empty: no header row")
        delimiter = _sniff_delimiter(header_line)
        names = [c.strip() for c in header_line.rstrip("\r\n").split(delimiter)]
        required = [schema.time_col, schema.lat_col, schema.lon_col]
        if schema.accuracy_col is not None:
            required.append(schema.accuracy_col)
        for col in required:
            if col not in names:
                raise DataError(f"missing column {col!r} in header (line 1): {names}")
        idx = {c: names.index(c) for c in required}

        report = ParseReport()
        rows: list[Fix] = []
        reader = csv.reader(stream, delimiter=delimiter)
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            report.rows_total += 1
            try:
                ts = _parse_timestamp(row[idx[schema.time_col]])
                lat = float(row[idx[schema.lat_col]])
                lon = float(row[idx[schema.lon_col]])
                if schema.accuracy_col is not None:
                    acc = float(row[idx[schema.accuracy_col]])
                else:
                    acc = 1.0
                if acc < 0:
                    raise ValueError("negative accuracy")
            except (ValueError, IndexError):
                report.rows_bad_value += 1
                continue
            rows.append(Fix(timestamp=ts, lat=lat, lon=lon, accuracy=acc))
    finally:
        if close_after:
            stream.close()

    # stable sort keeps input order among equal timestamps, then first-wins dedup
    rows.sort(key=lambda f: f.timestamp)
    kept: list[Fix] = []
    seen_last_ts: int | None = None
    for f in rows:
        if seen_last_ts is not None and f.timestamp == seen_last_ts:
            report.rows_duplicate_ts += 1
            continue
        kept.append(f)
        seen_last_ts = f.timestamp
    report.rows_kept = len(kept)
    return Trajectory(user_id=user_id, fixes=tuple(kept)), report


def _median_sampling_interval(intervals: list[int], gap_threshold_s: int) -> float:
    """Median of the true sampling intervals (gap-sized holes excluded)."""
    sampling = [dt for dt in intervals if dt <= gap_threshold_s]
    if not sampling:
        return 0.0
    return float(statistics.median(sampling))


def clean(
    t: Trajectory,
    gap_threshold_s: int = DEFAULT_GAP_THRESHOLD_S,
    max_accuracy_m: float = DEFAULT_MAX_ACCURACY_M,
) -> tuple[Trajectory, CleanReport]:
    """Full cleaning pipeline, returning the processed trajectory and its audit report.

    Stages, in order:

    1. drop fixes with accuracy > max_accuracy_m or accuracy == 0;
    2. on the filtered sequence, mark a segment break wherever consecutive
       timestamps differ by more than gap_threshold_s, and give each fix the
       time to its successor, capped at gap_threshold_s across a break; the
       final fix gets the trajectory's median sampling interval;
    3. collapse each run of consecutive bit-identical coordinates to its first
       fix, summing the run's durations; a break absorbed inside a run
       re-anchors to the first surviving fix after it.

    Already-processed input is returned unchanged (the pipeline is idempotent
    by construction; raw sampling structure is not recoverable after dedup).

    Raises
    ------
    DataError
        If every fix is removed.
    """
    if t.processed:
        return t, CleanReport(input_fixes=len(t), output_fixes=len(t))

    report = CleanReport(input_fixes=len(t.fixes))

    filtered: list[Fix] = []
    for f in t.fixes:
        if f.accuracy == 0:
            report.removed_accuracy_zero += 1
        elif f.accuracy > max_accuracy_m:
            report.removed_accuracy_above_max += 1
        else:
            filtered.append(f)
    if not filtered:
        raise DataError(f"trajectory {t.user_id!r}: no fixes survive the accuracy filter")

    n = len(filtered)
    intervals = [filtered[i + 1].timestamp - filtered[i].timestamp for i in range(n - 1)]
    median_dt = _median_sampling_interval(intervals, gap_threshold_s)
    report.median_interval_s = median_dt

    durations = [0.0] * n
    break_raw = [False] * n
    for i, dt in enumerate(intervals):
        if dt > gap_threshold_s:
            durations[i] = float(gap_threshold_s)
            break_raw[i + 1] = True
        else:
            durations[i] = float(dt)
    durations[n - 1] = median_dt

    out: list[Fix] = []
    out_breaks: set[int] = set()
    pending_break = False  # break swallowed by a dedup run, re-anchor to next survivor
    i = 0
    while i < n:
        j = i
        run_duration = durations[i]
        run_absorbed_break = False
        while j + 1 < n and filtered[j + 1].lat == filtered[i].lat and filtered[j + 1].lon == filtered[i].lon:
            j += 1
            run_duration += durations[j]
            report.removed_duplicate_coordinate += 1
            if break_raw[j]:
                run_absorbed_break = True
        if pending_break or break_raw[i]:
            out_breaks.add(len(out))
        pending_break = run_absorbed_break
        out.append(replace(filtered[i], duration=run_duration))
        i = j + 1

    report.output_fixes = len(out)
    report.segment_breaks = len(out_breaks)
    return (
        Trajectory(
            user_id=t.user_id,
            fixes=tuple(out),
            day_offset_min=t.day_offset_min,
            segment_breaks=frozenset(out_breaks),
            processed=True,
        ),
        report,
    )


def preprocess(
    t: Trajectory,
    gap_threshold_s: int = DEFAULT_GAP_THRESHOLD_S,
    max_accuracy_m: float = DEFAULT_MAX_ACCURACY_M,
) -> Trajectory:
    """Cleaning pipeline without the report; see :func:`clean`."""
    cleaned, _ = clean(t, gap_threshold_s=gap_threshold_s, max_accuracy_m=max_accuracy_m)
    return cleaned


# ---------------------------------------------------------------------------
# processed-trajectory CSV round trip

_PROCESSED_COLUMNS = ["timestamp", "lat", "lon", "accuracy", "duration", "segment_break"]


def save_csv(t: Trajectory, target: str | Path | IO[str]) -> None:
    """Write a processed trajectory as CSV with duration and break columns."""
    own = isinstance(target, (str, Path))
    stream = open(target, "w", newline="") if own else target
    try:
        writer = csv.writer(stream)
        writer.writerow(_PROCESSED_COLUMNS)
        for i, f in enumerate(t.fixes):
            writer.writerow(
                [f.timestamp, repr(f.lat), repr(f.lon), repr(f.accuracy), repr(f.duration), int(i in t.segment_breaks)]
            )
    finally:
        if own:
            stream.close()


def load_csv(source: str | Path | IO[str], user_id: str = "", day_offset_min: int = 0) -> Trajectory:
    """Read a CSV produced by :func:`save_csv` back into a processed Trajectory."""
    own = isinstance(source, (str, Path))
    if own and not user_id:
        user_id = Path(source).stem
    stream = open(source, "r", newline="") if own else source
    try:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != _PROCESSED_COLUMNS:
            raise DataError(f"not a processed-trajectory CSV (expected header {_PROCESSED_COLUMNS})")
        fixes: list[Fix] = []
        breaks: set[int] = set()
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                ts, lat, lon, acc, dur, brk = row
                fixes.append(
                    Fix(
                        timestamp=int(ts),
                        lat=float(lat),
                        lon=float(lon),
                        accuracy=float(acc),
                        duration=float(dur),
                    )
                )
                if int(brk):
                    breaks.add(len(fixes) - 1)
            except (ValueError, IndexError) as exc:
                raise DataError(f"bad row at line {line_no}: {row!r}") from exc
    finally:
        if own:
            stream.close()
    return Trajectory(
        user_id=user_id,
        fixes=tuple(fixes),
        day_offset_min=day_offset_min,
        segment_breaks=frozenset(breaks),
        processed=True,
    )
