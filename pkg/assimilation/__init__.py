"""Augmented extended Kalman filter for the time-lag moisture model."""
from assimilation.kalman import (
    AugmentedState,
    FilterConfig,
    LearningResult,
    check_covariance,
    jacobian,
    forecast_step,
    analysis_step,
    run_learning,
    run_forecast,
    summarize_learning,
)
