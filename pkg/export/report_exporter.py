"""
JSON report writer and plot-script generator.

Plot scripts are small standalone files placed next to a trajectory CSV. They
import Visualization.plotting_utils at run time, so the pipelines never touch
matplotlib themselves.
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Optional

from config import PROJECT_ROOT

logger = logging.getLogger(__name__)

PLOT_TEMPLATE = '''"""Plot {csv_name} to {png_name}. Generated by fmda; safe to edit."""
import os
import sys

sys.path.insert(0, {project_root!r})

from Visualization.plotting_utils import plot_trajectory_csv

HERE = os.path.dirname(os.path.abspath(__file__))

if __name__ == "__main__":
    out = plot_trajectory_csv(os.path.join(HERE, {csv_name!r}), os.path.join(HERE, {png_name!r}),
                              split_time={split_time!r}, title={title!r})
    print(f"✓ Saved plot: {{out}}")
'''


def _jsonable(value: Any) -> Any:
    """Replace non-finite floats with None; JSON has no NaN."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def save_report(report: dict, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(_jsonable(report), f, sort_keys=True, indent=2, allow_nan=False)
        f.write("\n")
    logger.info(f"Wrote report {path}")
    return path


def write_plot_script(path, csv_name: str, split_time: Optional[float], title: str = "") -> Path:
    """
    Write a plot script for a trajectory CSV in the same directory.

    Args:
        path: Script path, e.g. out/plot_kf.py
        csv_name: File name of the CSV next to the script
        split_time: Time of the learning/forecast boundary, marked on the plot
        title: Figure title
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    png_name = Path(csv_name).with_suffix(".png").name
    path.write_text(PLOT_TEMPLATE.format(csv_name=csv_name, png_name=png_name,
                                         project_root=PROJECT_ROOT,
                                         split_time=None if split_time is None else float(split_time),
                                         title=title),
                    encoding="utf-8")
    logger.info(f"Wrote plot script {path}")
    return path
