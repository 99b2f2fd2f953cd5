"""JSON reader for recurrent network weights."""
import json
import math
from pathlib import Path
from typing import Tuple

from errors import DomainError
from rnn.network import WEIGHT_FIELDS, RnnWeights


def load_weights(path) -> Tuple[RnnWeights, float]:
    """
    Load weights saved by export.weights_exporter.

    Args:
        path: JSON file {h, dt, w_in, w_hid, b_hid, w_out, b_out}

    Returns:
        (weights, dt the weights were initialized/trained with)

    Raises:
        DomainError: for malformed JSON, missing keys or inconsistent shapes
        OSError: if the file cannot be read
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise DomainError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}", field="weights")

    if not isinstance(data, dict):
        raise DomainError(f"{path}: expected a JSON object", field="weights")
    missing = [key for key in ("h", "dt") + WEIGHT_FIELDS if key not in data]
    if missing:
        raise DomainError(f"{path}: missing key(s) {', '.join(missing)}", field="weights")

    try:
        weights = RnnWeights(**{name: data[name] for name in WEIGHT_FIELDS})
    except (TypeError, ValueError) as e:
        raise DomainError(f"{path}: {e}", field="weights") from e
    if weights.h != data["h"]:
        raise DomainError(f"{path}: h = {data['h']} but arrays have width {weights.h}", field="h")
    dt = float(data["dt"])
    if not (math.isfinite(dt) and dt > 0.0):
        raise DomainError(f"{path}: must be a finite value > 0, got {data['dt']}", field="dt")
    return weights, dt
