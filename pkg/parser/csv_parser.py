"""
CSV readers for weather/moisture series and truth trajectories.

Series file header: time_hours,temp_k,rh_pct,fmc_pct
An empty fmc_pct cell is an absent observation. Line numbers in errors count
the header as line 1.
"""
import logging
import math
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd

from config import DEFAULT_SPLIT_FRACTION
from dataset.series import SPACING_TOL, TimeSeries
from errors import CsvFormatError, DomainError
from model.moisture import AtmosphericSample

logger = logging.getLogger(__name__)

SERIES_COLUMNS = ["time_hours", "temp_k", "rh_pct", "fmc_pct"]
TRUTH_COLUMNS = ["time_hours", "truth_pct"]


def default_split(n: int) -> int:
    """round(2/3 n) clamped to [1, n-1]."""
    return min(max(int(round(n * DEFAULT_SPLIT_FRACTION)), 1), n - 1)


def _read_table(path, columns: List[str]) -> pd.DataFrame:
    """Read every cell as text so that each value can be checked with its line number."""
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise CsvFormatError("file is empty, header required", line=1)
    except pd.errors.ParserError as e:
        raise CsvFormatError(f"malformed CSV: {e}")
    df.columns = [c.strip() for c in df.columns]
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise CsvFormatError(f"missing column(s) {', '.join(missing)}; header is {list(df.columns)}",
                             line=1)
    return df


def _parse_cell(text: str, line: int, column: str, required: bool = True) -> Optional[float]:
    text = text.strip()
    if text == "":
        if required:
            raise CsvFormatError("missing value", line=line, field=column)
        return None
    try:
        value = float(text)
    except ValueError:
        raise CsvFormatError(f"cannot parse {text!r} as a number", line=line, field=column)
    if not math.isfinite(value):
        raise CsvFormatError(f"value {text!r} is not finite", line=line, field=column)
    return value


def load_csv(path, split: Optional[int] = None, dt: Optional[float] = None) -> TimeSeries:
    """
    Load a weather/moisture series.

    Args:
        path: CSV file with the series header
        split: Learning/forecast split index (default round(2/3 n), clamped)
        dt: Expected spacing in hours; inferred from the first two rows if None

    Returns:
        Validated TimeSeries, rows ordered by time

    Raises:
        CsvFormatError: missing column, unparsable or out-of-range value,
            non-uniform spacing; the message names the file line
        OSError: if the file cannot be read
    """
    path = Path(path)
    df = _read_table(path, SERIES_COLUMNS)
    if len(df) < 2:
        raise CsvFormatError(f"a series needs at least 2 rows, got {len(df)}", line=len(df) + 1)

    rows = []
    for idx, record in enumerate(df[SERIES_COLUMNS].itertuples(index=False)):
        line = idx + 2
        time, temp, rh = (_parse_cell(v, line, c) for v, c in zip(record[:3], SERIES_COLUMNS[:3]))
        obs = _parse_cell(record[3], line, "fmc_pct", required=False)
        try:
            sample = AtmosphericSample(time, temp, rh, obs)
        except DomainError as e:
            raise CsvFormatError(str(e), line=line) from e
        rows.append((line, sample))

    rows.sort(key=lambda r: r[1].time)
    lines = [line for line, _ in rows]
    samples = tuple(sample for _, sample in rows)
    times = np.array([s.time for s in samples])
    step = float(times[1] - times[0]) if dt is None else float(dt)
    if not step > 0.0:
        raise CsvFormatError(f"duplicate time {times[0]}", line=lines[1], field="time_hours")
    bad = np.flatnonzero(np.abs(np.diff(times) - step) > SPACING_TOL)
    if bad.size:
        k = int(bad[0]) + 1
        raise CsvFormatError(f"non-uniform spacing: t={times[k]} follows t={times[k - 1]}, "
                             f"expected step {step}", line=lines[k], field="time_hours")

    n = len(samples)
    split = default_split(n) if split is None else split
    try:
        series = TimeSeries(samples, step, split)
    except DomainError as e:
        raise CsvFormatError(str(e)) from e
    logger.info(f"Loaded {n} samples from {path} (dt {step} h, split {split})")
    return series


def load_truth_csv(path, n: Optional[int] = None, times: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Load a truth trajectory (time_hours,truth_pct).

    Args:
        path: CSV file
        n: Expected number of rows, checked when given
        times: Series times the truth must line up with (within the spacing
            tolerance); implies n = len(times)

    Raises:
        CsvFormatError: on a missing column, bad value, length or time mismatch
    """
    df = _read_table(Path(path), TRUTH_COLUMNS)
    values = np.array([_parse_cell(v, idx + 2, "truth_pct") for idx, v in enumerate(df["truth_pct"])])
    truth_times = np.array([_parse_cell(v, idx + 2, "time_hours") for idx, v in enumerate(df["time_hours"])])
    order = np.argsort(truth_times, kind="stable")
    if times is not None:
        n = len(times)
    if n is not None and len(values) != n:
        raise CsvFormatError(f"truth has {len(values)} rows but the series has {n}", field="truth_pct")
    if times is not None:
        off = np.flatnonzero(np.abs(truth_times[order] - np.asarray(times, dtype=float)) > SPACING_TOL)
        if off.size:
            k = off[0]
            raise CsvFormatError(f"truth time {truth_times[order[k]]:g} h does not match series time "
                                 f"{times[k]:g} h", line=int(order[k]) + 2, field="time_hours")
    return values[order]
