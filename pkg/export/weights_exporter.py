"""JSON writer for recurrent network weights."""
import json
import logging
from pathlib import Path

from rnn.network import WEIGHT_FIELDS, RnnWeights

logger = logging.getLogger(__name__)


def weights_to_dict(weights: RnnWeights, dt: float) -> dict:
    """Row-major nested lists; Python floats serialise with full repr precision."""
    data = {"h": weights.h, "dt": float(dt)}
    for name in WEIGHT_FIELDS:
        value = getattr(weights, name)
        data[name] = value if isinstance(value, float) else value.tolist()
    return data


def save_weights(weights: RnnWeights, dt: float, path) -> Path:
    """
    Write weights as {h, dt, w_in, w_hid, b_hid, w_out, b_out}.

    Args:
        weights: Network weights
        dt: Timestep the weights belong to, checked on prediction
        path: Output JSON path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(weights_to_dict(weights, dt), f, sort_keys=True, indent=2)
        f.write("\n")
    logger.info(f"Saved weights (h={weights.h}) to {path}")
    return path
