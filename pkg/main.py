"""
Command-line interface for the fuel moisture data assimilation toolkit.

Usage:
    python main.py synth [--config scenario.json] [--seed N] [--split K] --out DIR
    python main.py run-kf --series series.csv [--truth truth.csv] --out DIR
    python main.py train-rnn --series series.csv [--weights w.json] --out DIR
    python main.py predict-rnn --series series.csv --weights w.json --out DIR
    python main.py compare --series series.csv --out DIR

    # Model, filter and training overrides
    --time-lag 10 --q-m 1e-3 --q-de 1e-4 --r 1e-2
    --window 5 --lr 1e-4 --epochs 20 --hidden 6 --init-mode multi-timescale

Exit codes: 0 success, 1 invalid input or configuration, 2 file access error.
Set FMDA_LOG=INFO (or DEBUG) for progress logging.
"""
import sys
import os
import argparse
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import (
    setup_logging, OUTPUT_DIR, DEFAULT_TIME_LAG, DEFAULT_Q_M, DEFAULT_Q_DELTA_E, DEFAULT_R,
    DEFAULT_WINDOW, DEFAULT_LR, DEFAULT_EPOCHS, DEFAULT_HIDDEN, DEFAULT_INIT_MODE, DEFAULT_SEED,
)
from assimilation.kalman import FilterConfig
from dataset.series import TimeSeries
from dataset.synthetic import SynthConfig
from errors import ConfigError, FmdaError
from harness.pipelines import (
    find_truth, load_series, cmd_synth, cmd_run_kf, cmd_train_rnn, cmd_predict_rnn, cmd_compare,
)
from model.moisture import ModelConfig
from parser.config_parser import load_synth_config
from rnn.network import InitMode
from rnn.training import TrainConfig

COMMANDS = ["synth", "run-kf", "train-rnn", "predict-rnn", "compare"]
WEIGHTS_FILENAME = "rnn_weights.json"


def _fmt(value) -> str:
    return "n/a" if value is None else f"{value:.4f}"


class FmdaCLI:
    """Command-line interface; one method per command."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.out = Path(args.out)

    # ---------- configuration from flags ----------

    def _model_config(self, dt: float) -> ModelConfig:
        return ModelConfig(time_lag=self.args.time_lag, dt=dt)

    def _filter_config(self) -> FilterConfig:
        return FilterConfig(q_m=self.args.q_m, q_delta_e=self.args.q_de, r=self.args.r)

    def _train_config(self) -> TrainConfig:
        return TrainConfig(window=self.args.window, lr=self.args.lr, epochs=self.args.epochs,
                           seed=self.args.seed, init_mode=InitMode(self.args.init_mode),
                           hidden=self.args.hidden)

    def _series(self) -> TimeSeries:
        if not self.args.series:
            raise ConfigError(f"required for '{self.args.command}'", field="--series")
        series = load_series(self.args.series, truth_path=self.args.truth, split=self.args.split)
        if series.truth is not None:
            print(f"✓ Scoring against truth from {find_truth(self.args.series, self.args.truth)}")
        return series

    def _weights_path(self) -> Path:
        return Path(self.args.weights) if self.args.weights else self.out / WEIGHTS_FILENAME

    def _print_report(self, title: str, report: dict):
        print(f"\n{title}")
        print(f"  RMSE learning: {_fmt(report.get('rmse_learning'))}  "
              f"forecast: {_fmt(report.get('rmse_forecast'))}  (vs {report.get('target')})")
        if "dE_final" in report:
            print(f"  Final dE: {report['dE_final']:.4f}")
        if report.get("loss_history"):
            history = report["loss_history"]
            print(f"  Loss: first epoch {history[0]:.6g}, last epoch {history[-1]:.6g}")

    # ---------- commands ----------

    def synth(self):
        scenario = load_synth_config(self.args.config) if self.args.config else SynthConfig()
        if self.args.seed_given:
            scenario = replace(scenario, seed=self.args.seed)
        if self.args.split is not None:
            scenario = replace(scenario, split=self.args.split)
        series_path, truth_path = cmd_synth(scenario, self._model_config(scenario.dt), self.out)
        print(f"✓ Synthesized {scenario.n_steps} steps (split {scenario.resolved_split})")
        print(f"✓ Series: {series_path}")
        print(f"✓ Truth:  {truth_path}")

    def run_kf(self):
        series = self._series()
        report = cmd_run_kf(series, self._model_config(series.dt), self._filter_config(),
                            self.out, seed=self.args.seed)
        self._print_report("Kalman filter", report.to_dict())
        print(f"\n✓ Outputs in {self.out}")

    def train_rnn(self):
        series = self._series()
        weights_path = self._weights_path()
        report = cmd_train_rnn(series, self._model_config(series.dt), self._train_config(),
                               weights_path, self.out)
        self._print_report("Recurrent network training", report.to_dict())
        print(f"\n✓ Weights: {weights_path}")

    def predict_rnn(self):
        series = self._series()
        report = cmd_predict_rnn(series, self._weights_path(), self.out, seed=self.args.seed)
        self._print_report("Recurrent network prediction", report.to_dict())
        print(f"\n✓ Outputs in {self.out}")

    def compare(self):
        series = self._series()
        report = cmd_compare(series, self._model_config(series.dt), self._filter_config(),
                             self._train_config(), self.out)
        self._print_report("Kalman filter", report["kf"])
        self._print_report("Recurrent network", report["rnn"])
        print(f"\n✓ Forecast winner: {report['winner_forecast_rmse'] or 'n/a'}")
        print(f"✓ Outputs in {self.out}")


class FmdaArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors are configuration errors (exit code 1)."""

    def error(self, message: str):
        raise ConfigError(f"{message}\n{self.format_usage().rstrip()}")


def build_parser() -> argparse.ArgumentParser:
    parser = FmdaArgumentParser(
        prog="fmda",
        description="Fuel moisture data assimilation: Kalman filter vs recurrent network",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py synth --out runs/canonical
  python main.py compare --series runs/canonical/series.csv --out runs/canonical
  python main.py train-rnn --series station.csv --hidden 1 --init-mode identical --out runs/station
        """,
    )
    parser.add_argument("command", choices=COMMANDS, help="Command to execute")
    parser.add_argument("--config", help="Synthetic scenario JSON (synth)")
    parser.add_argument("--series", help="Series CSV (time_hours,temp_k,rh_pct,fmc_pct)")
    parser.add_argument("--truth", help="Truth CSV for scoring (default: truth.csv next to the series)")
    parser.add_argument("--weights", help=f"Weights JSON (default: <out>/{WEIGHTS_FILENAME})")
    parser.add_argument("--out", default=OUTPUT_DIR, help=f"Output directory (default: {OUTPUT_DIR})")
    parser.add_argument("--seed", type=int, default=None, help=f"Random seed (default: {DEFAULT_SEED})")
    parser.add_argument("--split", type=int, help="Learning/forecast split index")
    parser.add_argument("--time-lag", type=float, default=DEFAULT_TIME_LAG, help="Time lag T, hours")
    parser.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="Training window length")
    parser.add_argument("--lr", type=float, default=DEFAULT_LR, help="SGD learning rate")
    parser.add_argument("--epochs", type=int, default=DEFAULT_EPOCHS, help="Training epochs")
    parser.add_argument("--hidden", type=int, default=DEFAULT_HIDDEN, help="Hidden width")
    parser.add_argument("--init-mode", default=DEFAULT_INIT_MODE, choices=[m.value for m in InitMode],
                        help="Weight initialization")
    parser.add_argument("--q-m", type=float, default=DEFAULT_Q_M, help="Process noise of m")
    parser.add_argument("--q-de", type=float, default=DEFAULT_Q_DELTA_E, help="Process noise of dE")
    parser.add_argument("--r", type=float, default=DEFAULT_R, help="Observation noise variance")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI; returns the process exit code."""
    setup_logging()
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        print(f"✗ {e}", file=sys.stderr)
        return 1
    args.seed_given = args.seed is not None
    if args.seed is None:
        args.seed = DEFAULT_SEED

    cli = FmdaCLI(args)
    handlers = {
        "synth": cli.synth,
        "run-kf": cli.run_kf,
        "train-rnn": cli.train_rnn,
        "predict-rnn": cli.predict_rnn,
        "compare": cli.compare,
    }
    try:
        handlers[args.command]()
    except FmdaError as e:
        print(f"✗ {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"✗ {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
