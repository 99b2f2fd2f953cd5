"""
JSON reader for synthetic scenario configurations.

Keys mirror the SynthConfig field names. `true_dE` / `true_de` are accepted
as aliases of `true_delta_e`.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict

from dataset.synthetic import SynthConfig
from errors import ConfigError

logger = logging.getLogger(__name__)

KEY_ALIASES = {"true_dE": "true_delta_e", "true_de": "true_delta_e"}


def synth_config_from_dict(data: Dict[str, Any]) -> SynthConfig:
    """
    Build a SynthConfig from a mapping, rejecting unknown keys.

    Raises:
        ConfigError: naming the unknown or invalid field
    """
    if not isinstance(data, dict):
        raise ConfigError(f"expected a JSON object, got {type(data).__name__}")
    known = set(SynthConfig.field_names())
    kwargs = {}
    for key, value in data.items():
        name = KEY_ALIASES.get(key, key)
        if name not in known:
            raise ConfigError(f"unknown key; expected one of {sorted(known)}", field=key)
        if name in ("dt", "true_delta_e", "obs_sigma", "m0", "rh_mean", "rh_amp", "temp_mean",
                    "temp_amp", "period", "true_time_lag") and isinstance(value, int) \
                and not isinstance(value, bool):
            value = float(value)
        if name == "anomaly" and value is not None:
            if not isinstance(value, (list, tuple)):
                raise ConfigError(f"expected [start, end, rh_offset] or null, got {value!r}", field=key)
            value = tuple(value)
        kwargs[name] = value
    return SynthConfig(**kwargs)


def load_synth_config(path) -> SynthConfig:
    """
    Load a scenario JSON file; missing keys take the canonical defaults.

    Raises:
        ConfigError: for malformed JSON or an invalid field
        OSError: if the file cannot be read
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}")
    cfg = synth_config_from_dict(data)
    logger.info(f"Loaded scenario from {path}")
    return cfg
