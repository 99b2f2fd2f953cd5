#!/usr/bin/env python3
"""
Tests for the harness pipelines, metrics and the fmda command line.
"""
import json

import numpy as np
import pandas as pd
import pytest

from assimilation.kalman import FilterConfig
from dataset.series import TimeSeries
from dataset.synthetic import SynthConfig, synth
from errors import DomainError, TrainingError
from export.csv_exporter import save_csv
from harness.metrics import RunReport, rmse, winner
from harness.pipelines import predict_rnn, rnn_prediction, run_kf, train_rnn
from main import main
from model.moisture import ModelConfig, simulate
from rnn.network import InitMode, evaluate_sequence, init_euler, initial_hidden, initial_output
from rnn.training import TrainConfig

CFG = ModelConfig(time_lag=10.0, dt=1.0)
TUNED_FLAGS = ["--r", "0.09", "--q-m", "1e-4", "--q-de", "1e-5"]


@pytest.fixture(scope="module")
def canonical(tmp_path_factory):
    """Canonical scenario written by the synth command."""
    out = tmp_path_factory.mktemp("canonical")
    assert main(["synth", "--out", str(out)]) == 0
    return out


@pytest.fixture(scope="module")
def steady(tmp_path_factory):
    """Canonical weather and noise without the unrecorded wet spell."""
    out = tmp_path_factory.mktemp("steady")
    scenario = out / "scenario.json"
    scenario.write_text(json.dumps({"anomaly": None}))
    assert main(["synth", "--config", str(scenario), "--out", str(out)]) == 0
    return out


@pytest.fixture
def small(tmp_path):
    """A short scenario for the slower commands."""
    scenario = tmp_path / "scenario.json"
    scenario.write_text(json.dumps({"n_steps": 240, "split": 160, "anomaly": None}))
    out = tmp_path / "small"
    assert main(["synth", "--config", str(scenario), "--out", str(out)]) == 0
    return out


def _read_json(path):
    return json.loads(path.read_text())


# ============================================================================
# METRICS
# ============================================================================

def test_rmse_hand_computed():
    assert rmse([1.0, 2.0, 3.0], [1.0, 2.0, 5.0]) == pytest.approx(np.sqrt(4.0 / 3.0))
    assert rmse([0.0, 2.0, 3.0], [np.nan, 2.0, 5.0]) == pytest.approx(np.sqrt(2.0))
    assert rmse([1.0], [np.nan]) is None
    with pytest.raises(ValueError):
        rmse([1.0, 2.0], [1.0])


def test_winner_by_forecast_rmse():
    kf = RunReport("kf", 0.1, 0.5)
    assert winner(kf, RunReport("rnn", 0.2, 0.4)) == "rnn"
    assert winner(kf, RunReport("rnn", 0.2, 0.6)) == "kf"
    assert winner(kf, RunReport("rnn", 0.2, 0.5)) == "tie"
    assert winner(kf, RunReport("rnn", 0.2, None)) is None


def test_report_keys():
    report = RunReport("kf", 0.1, 0.2, seed=0, delta_e_final=0.9).to_dict()
    assert report["dE_final"] == 0.9
    assert "loss_history" not in report
    assert RunReport("rnn", None, None, loss_history=[2.0, 1.0]).to_dict()["loss_history"] == [2.0, 1.0]


# ============================================================================
# PIPELINES
# ============================================================================

def test_forecast_rmse_covers_forecast_range_only():
    series = TimeSeries.from_arrays([0.0, 1.0], [295.0, 295.0], [40.0, 40.0], [10.0, None], split=1,
                                    truth=[10.0, 12.0])
    result = run_kf(series, CFG, FilterConfig(r=1e-12))
    assert len(result.prediction) == 2
    assert result.report.rmse_learning == pytest.approx(0.0, abs=1e-6)
    assert result.report.rmse_forecast == pytest.approx(abs(result.prediction[1] - 12.0))


def test_kf_without_observations_is_a_pure_forecast():
    n = 48
    times = np.arange(n, dtype=float)
    series = TimeSeries.from_arrays(times, 295.0 + 0.0 * times, 30.0 + 20.0 * np.sin(times / 4.0),
                                    [None] * n, split=30)
    result = run_kf(series, CFG, FilterConfig())
    eqs = series.features()
    np.testing.assert_allclose(result.prediction, simulate(eqs[0].mean, 0.0, eqs[:-1], CFG))
    assert result.report.rmse_learning is None and result.report.rmse_forecast is None
    assert result.report.config["analyses"] == 0


def test_rnn_prediction_alignment():
    series, _ = synth(SynthConfig(n_steps=60, split=40), CFG)
    w = init_euler(3, CFG, InitMode.MULTI_TIMESCALE, [1.0, 10.0, 30.0])
    pred = rnn_prediction(w, series)
    h0 = initial_hidden(3, series.feature_matrix(), series.observations())
    assert len(pred) == 60
    assert pred[0] == initial_output(w, h0)
    np.testing.assert_array_equal(pred[1:], evaluate_sequence(w, h0, series.feature_matrix()[:-1]))


def test_zero_learning_rate_returns_initial_weights():
    series, _ = synth(SynthConfig(n_steps=80, split=60), CFG)
    tcfg = TrainConfig(lr=0.0, epochs=1)
    weights, result = train_rnn(series, CFG, tcfg)
    np.testing.assert_array_equal(weights.flatten(), tcfg.initial_weights(CFG).flatten())
    assert len(result.report.loss_history) == 1


def test_predict_rejects_other_timestep():
    series, _ = synth(SynthConfig(n_steps=20, split=10), CFG)
    with pytest.raises(DomainError, match="dt"):
        predict_rnn(series, init_euler(1, CFG, InitMode.IDENTICAL), weights_dt=0.5)


# ============================================================================
# COMMAND LINE
# ============================================================================

def test_synth_writes_series_and_truth(canonical):
    series = pd.read_csv(canonical / "series.csv")
    truth = pd.read_csv(canonical / "truth.csv")
    assert list(series.columns) == ["time_hours", "temp_k", "rh_pct", "fmc_pct"]
    assert list(truth.columns) == ["time_hours", "truth_pct"]
    assert len(series) == len(truth) == 1000
    assert series["fmc_pct"].iloc[:667].notna().all()
    assert series["fmc_pct"].iloc[667:].isna().all()


def test_run_kf_identifies_correction(steady, tmp_path):
    code = main(["run-kf", "--series", str(steady / "series.csv"), "--split", "667",
                 "--out", str(tmp_path)] + TUNED_FLAGS)
    assert code == 0
    report = _read_json(tmp_path / "kf_report.json")
    assert abs(report["dE_final"] - 1.0) < 0.3
    assert report["target"] == "truth"
    assert report["rmse_forecast"] is not None
    trajectory = pd.read_csv(tmp_path / "kf_trajectory.csv")
    assert list(trajectory.columns) == ["time", "m_model", "dE", "p00", "p11", "obs", "truth"]
    assert len(trajectory) == 1000
    assert trajectory["p00"].iloc[667:].isna().all()
    assert (tmp_path / "plot_kf.py").is_file()


def test_train_and_predict_rnn(small):
    series = str(small / "series.csv")
    assert main(["train-rnn", "--series", series, "--epochs", "3", "--out", str(small)]) == 0
    weights = small / "rnn_weights.json"
    assert weights.is_file()
    train_report = _read_json(small / "rnn_train_report.json")
    assert len(train_report["loss_history"]) == 3

    assert main(["predict-rnn", "--series", series, "--out", str(small)]) == 0
    report = _read_json(small / "rnn_report.json")
    assert report["rmse_forecast"] is not None and np.isfinite(report["rmse_forecast"])
    trajectory = pd.read_csv(small / "rnn_trajectory.csv")
    assert len(trajectory) == 240
    assert list(trajectory.columns) == ["time", "m_rnn", "obs", "truth"]
    assert (small / "plot_rnn.py").is_file()


def test_training_is_reproducible(small, tmp_path):
    series = str(small / "series.csv")
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        assert main(["train-rnn", "--series", series, "--epochs", "2", "--seed", "4",
                     "--init-mode", "random", "--weights", str(path), "--out", str(tmp_path)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_training_reduces_loss_on_canonical_scenario(canonical, tmp_path):
    assert main(["train-rnn", "--series", str(canonical / "series.csv"), "--split", "667",
                 "--out", str(tmp_path)]) == 0
    history = _read_json(tmp_path / "rnn_train_report.json")["loss_history"]
    assert len(history) == 20
    assert history[-1] < history[0]


def test_larger_learning_rate_diverges_on_canonical_scenario(canonical, tmp_path, capsys):
    series, _ = synth(SynthConfig(), CFG)
    with pytest.raises(TrainingError, match="epoch 1"):
        train_rnn(series, CFG, TrainConfig(lr=1e-3))
    assert main(["train-rnn", "--series", str(canonical / "series.csv"), "--lr", "1e-3",
                 "--out", str(tmp_path)]) == 1
    assert "diverged" in capsys.readouterr().err


def test_compare_report_and_determinism(small, tmp_path):
    series = str(small / "series.csv")
    outs = [tmp_path / "one", tmp_path / "two"]
    for out in outs:
        assert main(["compare", "--series", series, "--epochs", "2", "--out", str(out)]
                    + TUNED_FLAGS) == 0
    report = _read_json(outs[0] / "compare_report.json")
    assert set(report) == {"kf", "rnn", "winner_forecast_rmse"}
    assert report["winner_forecast_rmse"] in ("kf", "rnn", "tie")
    assert report["kf"]["method"] == "kf" and report["rnn"]["method"] == "rnn"
    assert (outs[0] / "compare_report.json").read_text() == (outs[1] / "compare_report.json").read_text()

    side_by_side = pd.read_csv(outs[0] / "compare.csv")
    assert list(side_by_side.columns) == ["time", "truth", "obs", "kf_pred", "rnn_pred"]
    assert len(side_by_side) == 240
    assert (outs[0] / "plot_compare.py").is_file()


def test_scoring_falls_back_to_observations_without_truth(tmp_path):
    series, _ = synth(SynthConfig(n_steps=60, split=40), CFG)
    save_csv(series, tmp_path / "station.csv")
    assert main(["run-kf", "--series", str(tmp_path / "station.csv"), "--split", "40",
                 "--out", str(tmp_path / "out")]) == 0
    report = _read_json(tmp_path / "out" / "kf_report.json")
    assert report["target"] == "observations"
    assert report["rmse_learning"] is not None
    # held-out observations were never generated, so the forecast has no target
    assert report["rmse_forecast"] is None


def test_exit_codes(tmp_path):
    assert main(["run-kf", "--out", str(tmp_path)]) == 1
    assert main(["run-kf", "--series", str(tmp_path / "missing.csv"), "--out", str(tmp_path)]) == 2

    bad = tmp_path / "bad.csv"
    bad.write_text("time_hours,temp_k,rh_pct,fmc_pct\n0,295,40,10\n1,295,oops,10\n")
    assert main(["run-kf", "--series", str(bad), "--out", str(tmp_path)]) == 1

    good = tmp_path / "good.csv"
    good.write_text("time_hours,temp_k,rh_pct,fmc_pct\n" + "".join(f"{k},295,40,10\n" for k in range(10)))
    assert main(["predict-rnn", "--series", str(good), "--weights", str(tmp_path / "none.json"),
                 "--out", str(tmp_path)]) == 2
    assert main(["run-kf", "--series", str(good), "--split", "10", "--out", str(tmp_path)]) == 1


@pytest.mark.parametrize("argv", [
    ["train-rnn", "--init-mode", "relu"],
    ["train-rnn", "--epochs", "abc"],
    ["fit", "--out", "x"],
    ["run-kf", "--bogus"],
])
def test_bad_arguments_are_validation_errors(argv, tmp_path, capsys):
    assert main(argv + ["--series", str(tmp_path / "s.csv")]) == 1
    assert "usage: fmda" in capsys.readouterr().err


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
