"""Experiment harness: pipelines, metrics and run reports."""
from harness.metrics import RunReport, rmse, winner
from harness.pipelines import (
    PipelineResult, find_truth, load_series, scoring_target, run_kf, rnn_prediction, train_rnn,
    predict_rnn, compare, cmd_synth, cmd_run_kf, cmd_train_rnn, cmd_predict_rnn, cmd_compare,
)
