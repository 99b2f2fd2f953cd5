#!/usr/bin/env python3
"""
Tests for file input/output: series and truth CSV, scenario JSON, weights
JSON, reports and plot scripts.
"""
import json

import numpy as np
import pytest

from assimilation.kalman import FilterConfig, summarize_learning
from dataset.synthetic import SynthConfig, synth
from errors import ConfigError, CsvFormatError, DomainError
from export.csv_exporter import save_csv, save_trajectory, save_truth_csv
from export.report_exporter import save_report, write_plot_script
from export.weights_exporter import save_weights
from harness.pipelines import load_series
from model.moisture import ModelConfig
from parser.config_parser import load_synth_config
from parser.csv_parser import load_csv, load_truth_csv
from parser.weights_parser import load_weights
from rnn.network import RnnWeights, init_random

CFG = ModelConfig(time_lag=10.0, dt=1.0)
HEADER = "time_hours,temp_k,rh_pct,fmc_pct\n"


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


# ============================================================================
# SERIES CSV
# ============================================================================

def test_series_csv_round_trip_is_exact(tmp_path):
    series, truth = synth(SynthConfig(n_steps=50, split=30, seed=2), CFG)
    save_csv(series, tmp_path / "series.csv")
    save_truth_csv(series.times, truth, tmp_path / "truth.csv")

    loaded = load_csv(tmp_path / "series.csv", split=30)
    assert loaded == series
    np.testing.assert_array_equal(load_truth_csv(tmp_path / "truth.csv", n=50), truth)


def test_series_csv_default_split(tmp_path):
    rows = "".join(f"{k},295,40,10\n" for k in range(9))
    series = load_csv(_write(tmp_path / "s.csv", HEADER + rows))
    assert series.split == 6


def test_rows_are_ordered_by_time(tmp_path):
    path = _write(tmp_path / "s.csv", HEADER + "2,295,40,11\n0,295,40,9\n1,295,40,10\n")
    series = load_csv(path, split=2)
    np.testing.assert_array_equal(series.times, [0.0, 1.0, 2.0])
    assert series.observations() == [9.0, 10.0, None]


def test_unparsable_value_reports_line(tmp_path):
    path = _write(tmp_path / "s.csv", HEADER + "0,295,40,10\n1,295,abc,10\n2,295,40,10\n")
    with pytest.raises(CsvFormatError, match="line 3") as exc:
        load_csv(path)
    assert exc.value.line == 3
    assert "rh_pct" in str(exc.value)


def test_out_of_range_value_reports_line(tmp_path):
    path = _write(tmp_path / "s.csv", HEADER + "0,295,120,10\n1,295,40,10\n")
    with pytest.raises(CsvFormatError, match="line 2"):
        load_csv(path)


def test_missing_required_value_and_column(tmp_path):
    path = _write(tmp_path / "s.csv", HEADER + "0,,40,10\n1,295,40,10\n")
    with pytest.raises(CsvFormatError, match="temp_k"):
        load_csv(path)
    path = _write(tmp_path / "t.csv", "time_hours,temp_k,rh_pct\n0,295,40\n1,295,40\n")
    with pytest.raises(CsvFormatError, match="fmc_pct"):
        load_csv(path)


def test_time_gap_names_offending_row(tmp_path):
    rows = "0,295,40,10\n1,295,40,10\n2,295,40,10\n4,295,40,10\n5,295,40,10\n"
    with pytest.raises(CsvFormatError, match="line 5") as exc:
        load_csv(_write(tmp_path / "s.csv", HEADER + rows))
    assert "non-uniform" in str(exc.value)


def test_empty_files_are_rejected(tmp_path):
    with pytest.raises(CsvFormatError):
        load_csv(_write(tmp_path / "empty.csv", ""))
    with pytest.raises(CsvFormatError):
        load_csv(_write(tmp_path / "header.csv", HEADER))


def test_empty_observation_cells_skip_analysis(tmp_path):
    rows = "".join(f"{k},295,40,{'' if k % 2 else 10 + 0.1 * k}\n" for k in range(20))
    series = load_csv(_write(tmp_path / "s.csv", HEADER + rows), split=15)
    assert series.observations()[1] is None
    result = summarize_learning(series, CFG, FilterConfig())
    assert result.analyses == 8


def test_missing_file_is_os_error(tmp_path):
    with pytest.raises(OSError):
        load_csv(tmp_path / "nope.csv")


def test_truth_length_must_match(tmp_path):
    path = _write(tmp_path / "truth.csv", "time_hours,truth_pct\n0,10\n1,10.5\n")
    with pytest.raises(CsvFormatError, match="rows"):
        load_truth_csv(path, n=3)


def test_truth_times_must_match_series_times(tmp_path):
    path = _write(tmp_path / "truth.csv", "time_hours,truth_pct\n1,10.5\n0,10\n5,11\n")
    with pytest.raises(CsvFormatError, match="line 4") as exc:
        load_truth_csv(path, times=np.array([0.0, 1.0, 2.0]))
    assert "time_hours" in str(exc.value)
    with pytest.raises(CsvFormatError, match="rows"):
        load_truth_csv(path, times=np.array([0.0, 1.0]))
    ok = _write(tmp_path / "ok.csv", "time_hours,truth_pct\n1,10.5\n0,10\n2,11\n")
    np.testing.assert_array_equal(load_truth_csv(ok, times=np.array([0.0, 1.0, 2.0])), [10.0, 10.5, 11.0])


def test_sibling_truth_on_other_clock_is_rejected(tmp_path):
    series, truth = synth(SynthConfig(n_steps=30, split=20), CFG)
    save_csv(series, tmp_path / "series.csv")
    save_truth_csv(series.times + 0.5, truth, tmp_path / "truth.csv")
    with pytest.raises(CsvFormatError, match="does not match"):
        load_series(tmp_path / "series.csv")


def test_trajectory_writer_skips_absent_columns(tmp_path):
    path = save_trajectory({"time": [0.0, 1.0], "m_model": [10.0, np.nan], "truth": None},
                           tmp_path / "traj.csv")
    lines = path.read_text().splitlines()
    assert lines == ["time,m_model", "0,10", "1,"]
    with pytest.raises(ValueError):
        save_trajectory({"time": [0.0, 1.0], "m": [1.0]}, tmp_path / "bad.csv")


# ============================================================================
# SCENARIO JSON
# ============================================================================

def test_scenario_json_with_aliases(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps({"n_steps": 100, "true_dE": 0.5, "split": 60, "anomaly": None,
                                "true_time_lag": 20}))
    cfg = load_synth_config(path)
    assert cfg.n_steps == 100
    assert cfg.true_delta_e == 0.5
    assert cfg.anomaly is None
    assert cfg.true_time_lag == 20.0
    assert cfg.obs_sigma == SynthConfig().obs_sigma


def test_scenario_json_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n_steps": 100, "foo": 1}')
    with pytest.raises(ConfigError, match="foo"):
        load_synth_config(path)
    path.write_text('{"n_steps": 100,')
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_synth_config(path)
    path.write_text('{"obs_sigma": -1}')
    with pytest.raises(ConfigError, match="obs_sigma"):
        load_synth_config(path)


# ============================================================================
# WEIGHTS JSON
# ============================================================================

def test_weights_round_trip_full_precision(tmp_path):
    w = init_random(3, seed=9)
    save_weights(w, 0.5, tmp_path / "w.json")
    loaded, dt = load_weights(tmp_path / "w.json")
    assert dt == 0.5
    np.testing.assert_array_equal(loaded.flatten(), w.flatten())
    data = json.loads((tmp_path / "w.json").read_text())
    assert sorted(data) == ["b_hid", "b_out", "dt", "h", "w_hid", "w_in", "w_out"]
    assert data["h"] == 3
    assert len(data["w_hid"]) == 3 and len(data["w_hid"][0]) == 3


def test_weights_file_validation(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"h": 1, "dt": 1.0, "w_in": [[0.1, 0.1]], "w_hid": [[0.9]],
                                "b_hid": [0.0], "w_out": [[1.0]]}))
    with pytest.raises(DomainError, match="b_out"):
        load_weights(path)
    path.write_text(json.dumps({"h": 2, "dt": 1.0, "w_in": [[0.1, 0.1]], "w_hid": [[0.9]],
                                "b_hid": [0.0], "w_out": [[1.0]], "b_out": 0.0}))
    with pytest.raises(DomainError, match="h"):
        load_weights(path)


# ============================================================================
# REPORTS AND PLOT SCRIPTS
# ============================================================================

def test_report_replaces_non_finite_values(tmp_path):
    path = save_report({"b": [1.0, float("inf")], "a": float("nan")}, tmp_path / "r.json")
    text = path.read_text()
    assert json.loads(text) == {"a": None, "b": [1.0, None]}
    assert text.index('"a"') < text.index('"b"')


def test_plot_script_is_valid_python(tmp_path):
    path = write_plot_script(tmp_path / "plot_kf.py", "kf_trajectory.csv", 667.0, title="KF")
    text = path.read_text(encoding="utf-8")
    compile(text, str(path), "exec")
    assert "kf_trajectory.csv" in text
    assert "kf_trajectory.png" in text
    assert "split_time=667.0" in text


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
