"""Scoring helpers and the per-method run report."""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np


def rmse(pred: Sequence[float], target: Sequence[float]) -> Optional[float]:
    """
    Root mean square error over the entries where the target is present.

    Args:
        pred: Predictions
        target: Scoring targets, NaN where absent

    Returns:
        The RMSE, or None when no target is present
    """
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.shape != target.shape:
        raise ValueError(f"prediction shape {pred.shape} differs from target shape {target.shape}")
    present = ~np.isnan(target)
    if not np.any(present):
        return None
    return float(np.sqrt(np.mean((pred[present] - target[present]) ** 2)))


@dataclass
class RunReport:
    """Outcome of one pipeline run; written as JSON by the CLI."""
    method: str
    rmse_learning: Optional[float]
    rmse_forecast: Optional[float]
    seed: Optional[int] = None
    delta_e_final: Optional[float] = None
    loss_history: Optional[List[float]] = None
    config: Dict[str, Any] = field(default_factory=dict)
    target: str = "truth"
    n_learning: int = 0
    n_forecast: int = 0

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "rmse_learning": self.rmse_learning,
            "rmse_forecast": self.rmse_forecast,
            "seed": self.seed,
            "config": self.config,
            "target": self.target,
            "n_learning": self.n_learning,
            "n_forecast": self.n_forecast,
        }
        if self.delta_e_final is not None:
            out["dE_final"] = self.delta_e_final
        if self.loss_history is not None:
            out["loss_history"] = list(self.loss_history)
        return out


def winner(kf: RunReport, rnn: RunReport) -> Optional[str]:
    """'kf', 'rnn' or 'tie' by forecast RMSE; None when either is missing."""
    a, b = kf.rmse_forecast, rnn.rmse_forecast
    if a is None or b is None or not (math.isfinite(a) and math.isfinite(b)):
        return None
    if a == b:
        return "tie"
    return "rnn" if b < a else "kf"
