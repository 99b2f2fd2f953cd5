#!/usr/bin/env python3
"""
Tests for post-hoc plotting of trajectory files.
"""
import runpy

import numpy as np
import pytest

pytest.importorskip("matplotlib")

from export.csv_exporter import save_trajectory
from export.report_exporter import write_plot_script
from Visualization.plotting_utils import plot_trajectory_csv


def _trajectory(tmp_path):
    t = np.arange(48, dtype=float)
    truth = 10.0 + 2.0 * np.sin(t / 6.0)
    obs = np.where(t < 32, truth + 0.1, np.nan)
    return save_trajectory({"time": t, "truth": truth, "obs": obs,
                            "kf_pred": truth + 0.2, "rnn_pred": truth - 0.1},
                           tmp_path / "compare.csv")


def test_plot_trajectory_csv_writes_png(tmp_path):
    csv = _trajectory(tmp_path)
    out = plot_trajectory_csv(csv, tmp_path / "figs" / "compare.png", split_time=32.0, title="Compare")
    assert out.is_file()
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_plot_requires_time_column(tmp_path):
    path = save_trajectory({"m_rnn": [1.0, 2.0]}, tmp_path / "bad.csv")
    with pytest.raises(ValueError, match="time"):
        plot_trajectory_csv(path, tmp_path / "bad.png")


def test_generated_plot_script_runs(tmp_path):
    _trajectory(tmp_path)
    script = write_plot_script(tmp_path / "plot_compare.py", "compare.csv", 32.0)
    runpy.run_path(str(script), run_name="__main__")
    assert (tmp_path / "compare.png").is_file()


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
