"""
CSV writers for series, truth and trajectory files.

Floats are written with 17 significant digits so that a file re-reads to the
exact same values; absent values are empty cells.
"""
import logging
from pathlib import Path
from typing import Dict, Optional, Sequence

import numpy as np
import pandas as pd

from config import CSV_FLOAT_FORMAT
from dataset.series import TimeSeries
from parser.csv_parser import SERIES_COLUMNS, TRUTH_COLUMNS

logger = logging.getLogger(__name__)


def _write(df: pd.DataFrame, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="")
    logger.info(f"Wrote {len(df)} rows to {path}")
    return path


def save_csv(series: TimeSeries, path) -> Path:
    """
    Write a series with every stored observation, learning and held out.

    The split itself is not stored; pass it again when loading.
    """
    df = pd.DataFrame({
        SERIES_COLUMNS[0]: series.times,
        SERIES_COLUMNS[1]: series.temps,
        SERIES_COLUMNS[2]: series.rhs,
        SERIES_COLUMNS[3]: series.all_observations(),
    })
    return _write(df, path)


def save_truth_csv(times: Sequence[float], truth: Sequence[float], path) -> Path:
    df = pd.DataFrame({TRUTH_COLUMNS[0]: np.asarray(times, dtype=float),
                       TRUTH_COLUMNS[1]: np.asarray(truth, dtype=float)})
    return _write(df, path)


def save_trajectory(columns: Dict[str, Optional[Sequence[float]]], path) -> Path:
    """
    Write named columns in the given order; None columns are skipped.

    Args:
        columns: Column name -> values (NaN for absent)
        path: Output CSV path
    """
    data = {name: np.asarray(values, dtype=float)
            for name, values in columns.items() if values is not None}
    lengths = {len(v) for v in data.values()}
    if len(lengths) > 1:
        raise ValueError(f"trajectory columns differ in length: "
                         f"{ {name: len(v) for name, v in data.items()} }")
    return _write(pd.DataFrame(data), path)
