"""
Pipelines behind the fmda commands.

Each pipeline takes a loaded TimeSeries and returns a RunReport plus the
trajectory columns; the cmd_* wrappers add file input/output. Predictions are
aligned with the series: element k is the prediction for sample k.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from assimilation.kalman import FilterConfig, run_forecast, summarize_learning
from dataset.series import SPACING_TOL, TimeSeries
from dataset.synthetic import SynthConfig, synth
from errors import DomainError
from export.csv_exporter import save_csv, save_trajectory, save_truth_csv
from export.report_exporter import save_report, write_plot_script
from export.weights_exporter import save_weights
from harness.metrics import RunReport, rmse, winner
from model.moisture import ModelConfig
from parser.csv_parser import load_csv, load_truth_csv
from parser.weights_parser import load_weights
from rnn.network import RnnWeights, evaluate_sequence, initial_hidden, initial_output
from rnn.training import TrainConfig, train

logger = logging.getLogger(__name__)

TRUTH_FILENAME = "truth.csv"


@dataclass
class PipelineResult:
    """Report and trajectory columns of one pipeline run."""
    report: RunReport
    prediction: np.ndarray
    columns: Dict[str, Optional[np.ndarray]]


# ============================================================================
# SERIES AND SCORING
# ============================================================================

def load_series(series_path, truth_path=None, split: Optional[int] = None) -> TimeSeries:
    """
    Load a series CSV and attach the truth trajectory when one is available.

    Args:
        series_path: Series CSV
        truth_path: Truth CSV; if None, a truth.csv next to the series is used
            when present
        split: Learning/forecast split (default round(2/3 n))
    """
    series = load_csv(series_path, split=split)
    truth_path = find_truth(series_path, truth_path)
    if truth_path is not None:
        series = series.with_truth(load_truth_csv(truth_path, times=series.times))
        logger.info(f"Scoring against truth from {truth_path}")
    return series


def find_truth(series_path, truth_path=None) -> Optional[Path]:
    """The explicit truth file, else a truth.csv next to the series, else None."""
    if truth_path is not None:
        return Path(truth_path)
    sibling = Path(series_path).parent / TRUTH_FILENAME
    if sibling.is_file() and sibling.resolve() != Path(series_path).resolve():
        return sibling
    return None


def scoring_target(series: TimeSeries) -> Tuple[np.ndarray, str]:
    """
    Per-sample scoring target: the truth when known, otherwise every stored
    observation (learning and held out). NaN marks samples without a target.
    """
    if series.truth is not None:
        return np.asarray(series.truth, dtype=float), "truth"
    return series.all_observations(), "observations"


def _score(report_kwargs: dict, series: TimeSeries, prediction: np.ndarray) -> RunReport:
    target, label = scoring_target(series)
    s = series.split
    return RunReport(rmse_learning=rmse(prediction[:s], target[:s]),
                     rmse_forecast=rmse(prediction[s:], target[s:]),
                     target=label, n_learning=s, n_forecast=len(series) - s,
                     **report_kwargs)


def _check_dt(series: TimeSeries, dt: float, what: str):
    if abs(series.dt - dt) > SPACING_TOL:
        raise DomainError(f"series spacing {series.dt} h differs from {what} dt {dt} h", field="dt")


# ============================================================================
# KALMAN FILTER PIPELINE
# ============================================================================

def run_kf(series: TimeSeries, cfg: ModelConfig, fcfg: FilterConfig,
           seed: Optional[int] = None) -> PipelineResult:
    """
    Filter the learning range, then run the model alone from the final state.

    The forecast uses the final learning state and dE; filter variances are
    reported for the learning range only.
    """
    learning = summarize_learning(series, cfg, fcfg)
    final_state, _ = learning.final
    eqs = series.features()
    s, n = series.split, len(series)
    forecast = run_forecast(final_state, eqs[s - 1:n - 1], cfg)[1:]

    prediction = np.concatenate([learning.m, forecast])
    gap = np.full(n - s, np.nan)
    columns = {
        "time": series.times,
        "m_model": prediction,
        "dE": np.concatenate([learning.delta_e, np.full(n - s, final_state.delta_e)]),
        "p00": np.concatenate([learning.p00, gap]),
        "p11": np.concatenate([learning.p11, gap]),
        "obs": series.all_observations(),
        "truth": series.truth,
    }
    report = _score({
        "method": "kf",
        "seed": seed,
        "delta_e_final": final_state.delta_e,
        "config": {"time_lag": cfg.time_lag, "dt": cfg.dt, "q_m": fcfg.q_m,
                   "q_delta_e": fcfg.q_delta_e, "r": fcfg.r, "p0": list(fcfg.p0),
                   "analyses": learning.analyses},
    }, series, prediction)
    logger.info(f"KF: dE {final_state.delta_e:.4f}, forecast RMSE {report.rmse_forecast}")
    return PipelineResult(report, prediction, columns)


# ============================================================================
# RECURRENT NETWORK PIPELINES
# ============================================================================

def rnn_prediction(weights: RnnWeights, series: TimeSeries) -> np.ndarray:
    """
    Stateless prediction of every sample: the initial output for sample 0,
    then one output per input for samples 1..n-1.
    """
    feats = series.feature_matrix()
    h0 = initial_hidden(weights.h, feats, series.observations())
    return np.concatenate([[initial_output(weights, h0)], evaluate_sequence(weights, h0, feats[:-1])])


def _rnn_result(weights: RnnWeights, series: TimeSeries, report_kwargs: dict) -> PipelineResult:
    prediction = rnn_prediction(weights, series)
    columns = {
        "time": series.times,
        "m_rnn": prediction,
        "obs": series.all_observations(),
        "truth": series.truth,
    }
    return PipelineResult(_score(report_kwargs, series, prediction), prediction, columns)


def train_rnn(series: TimeSeries, cfg: ModelConfig,
              tcfg: TrainConfig) -> Tuple[RnnWeights, PipelineResult]:
    """
    Train on the learning range: inputs of samples 0..split-2 predict the
    observations of samples 1..split-1.

    Raises:
        DomainError: when the learning range holds no usable target
    """
    _check_dt(series, cfg.dt, "model")
    feats = series.feature_matrix()
    obs = series.observation_array()
    s = series.split
    h0 = initial_hidden(tcfg.hidden, feats, series.observations())
    w0 = tcfg.initial_weights(cfg)
    weights, history = train(w0, feats[:s - 1], obs[1:s], tcfg, cfg, h0=h0)

    result = _rnn_result(weights, series, {
        "method": "rnn",
        "seed": tcfg.seed,
        "loss_history": history,
        "config": dict(tcfg.to_dict(), time_lag=cfg.time_lag, dt=cfg.dt,
                       timescales=list(tcfg.resolved_timescales(cfg.time_lag))),
    })
    return weights, result


def predict_rnn(series: TimeSeries, weights: RnnWeights, weights_dt: float,
                seed: Optional[int] = None) -> PipelineResult:
    """
    Raises:
        DomainError: if the weights were built for another timestep
    """
    _check_dt(series, weights_dt, "weights")
    return _rnn_result(weights, series, {
        "method": "rnn",
        "seed": seed,
        "config": {"h": weights.h, "dt": weights_dt},
    })


def compare(series: TimeSeries, cfg: ModelConfig, fcfg: FilterConfig,
            tcfg: TrainConfig) -> Tuple[dict, Dict[str, Optional[np.ndarray]]]:
    """
    Run both pipelines on the same split, concurrently.

    Returns:
        (report {kf, rnn, winner_forecast_rmse}, side-by-side columns)
    """
    with ThreadPoolExecutor(max_workers=2) as pool:
        kf_future = pool.submit(run_kf, series, cfg, fcfg, tcfg.seed)
        rnn_future = pool.submit(train_rnn, series, cfg, tcfg)
        kf = kf_future.result()
        _, rnn = rnn_future.result()

    columns = {
        "time": series.times,
        "truth": series.truth if series.truth is not None else np.full(len(series), np.nan),
        "obs": series.all_observations(),
        "kf_pred": kf.prediction,
        "rnn_pred": rnn.prediction,
    }
    report = {
        "kf": kf.report.to_dict(),
        "rnn": rnn.report.to_dict(),
        "winner_forecast_rmse": winner(kf.report, rnn.report),
    }
    logger.info(f"Compare: KF {kf.report.rmse_forecast}, RNN {rnn.report.rmse_forecast}, "
                f"winner {report['winner_forecast_rmse']}")
    return report, columns


# ============================================================================
# COMMANDS (file in, file out)
# ============================================================================

def cmd_synth(scenario: SynthConfig, cfg: ModelConfig, out_dir) -> Tuple[Path, Path]:
    """Write series.csv and truth.csv for a synthetic scenario."""
    out_dir = Path(out_dir)
    series, truth = synth(scenario, cfg)
    series_path = save_csv(series, out_dir / "series.csv")
    truth_path = save_truth_csv(series.times, truth, out_dir / TRUTH_FILENAME)
    return series_path, truth_path


def cmd_run_kf(series: TimeSeries, cfg: ModelConfig, fcfg: FilterConfig, out_dir,
               seed: Optional[int] = None) -> RunReport:
    out_dir = Path(out_dir)
    result = run_kf(series, cfg, fcfg, seed)
    save_trajectory(result.columns, out_dir / "kf_trajectory.csv")
    save_report(result.report.to_dict(), out_dir / "kf_report.json")
    write_plot_script(out_dir / "plot_kf.py", "kf_trajectory.csv", series.split_time,
                      title="Kalman filter")
    return result.report


def cmd_train_rnn(series: TimeSeries, cfg: ModelConfig, tcfg: TrainConfig,
                  weights_path, out_dir) -> RunReport:
    out_dir = Path(out_dir)
    weights, result = train_rnn(series, cfg, tcfg)
    save_weights(weights, cfg.dt, weights_path)
    save_report(result.report.to_dict(), out_dir / "rnn_train_report.json")
    return result.report


def cmd_predict_rnn(series: TimeSeries, weights_path, out_dir,
                    seed: Optional[int] = None) -> RunReport:
    out_dir = Path(out_dir)
    weights, weights_dt = load_weights(weights_path)
    result = predict_rnn(series, weights, weights_dt, seed)
    save_trajectory(result.columns, out_dir / "rnn_trajectory.csv")
    save_report(result.report.to_dict(), out_dir / "rnn_report.json")
    write_plot_script(out_dir / "plot_rnn.py", "rnn_trajectory.csv", series.split_time,
                      title="Recurrent network")
    return result.report


def cmd_compare(series: TimeSeries, cfg: ModelConfig, fcfg: FilterConfig,
                tcfg: TrainConfig, out_dir) -> dict:
    out_dir = Path(out_dir)
    report, columns = compare(series, cfg, fcfg, tcfg)
    save_trajectory(columns, out_dir / "compare.csv")
    save_report(report, out_dir / "compare_report.json")
    write_plot_script(out_dir / "plot_compare.py", "compare.csv", series.split_time,
                      title="Kalman filter vs recurrent network")
    return report
