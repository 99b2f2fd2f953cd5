"""
Synthetic weather and fuel moisture generator.

Produces a diurnal temperature/humidity cycle, the true moisture trajectory of
a stick with a known equilibrium correction, and noisy observations over the
learning range. The optional humidity anomaly is a multi-day wet spell that
the stick feels but the recorded weather misses, so any model driven by the
recorded weather mispredicts the truth inside it.
"""
import logging
import math
from dataclasses import dataclass, fields
from typing import Optional, Tuple

import numpy as np

from config import DEFAULT_SYNTH, DEFAULT_SPLIT_FRACTION
from dataset.series import TimeSeries, as_pairs
from errors import ConfigError
from model.moisture import ModelConfig, equilibria_array, simulate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SynthConfig:
    """Synthetic scenario; defaults are the canonical benchmark."""
    n_steps: int = DEFAULT_SYNTH["n_steps"]
    dt: float = DEFAULT_SYNTH["dt"]
    true_delta_e: float = DEFAULT_SYNTH["true_delta_e"]
    obs_sigma: float = DEFAULT_SYNTH["obs_sigma"]
    m0: float = DEFAULT_SYNTH["m0"]
    rh_mean: float = DEFAULT_SYNTH["rh_mean"]
    rh_amp: float = DEFAULT_SYNTH["rh_amp"]
    temp_mean: float = DEFAULT_SYNTH["temp_mean"]
    temp_amp: float = DEFAULT_SYNTH["temp_amp"]
    period: float = DEFAULT_SYNTH["period"]
    seed: int = DEFAULT_SYNTH["seed"]
    anomaly: Optional[Tuple[float, float, float]] = tuple(DEFAULT_SYNTH["anomaly"])
    split: Optional[int] = DEFAULT_SYNTH["split"]
    true_time_lag: Optional[float] = DEFAULT_SYNTH["true_time_lag"]

    def __post_init__(self):
        if isinstance(self.n_steps, bool) or not isinstance(self.n_steps, int) or self.n_steps < 2:
            raise ConfigError(f"must be an integer >= 2, got {self.n_steps!r}", field="n_steps")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"must be a non-negative integer, got {self.seed!r}", field="seed")
        for name in ("dt", "period"):
            _require(name, getattr(self, name), positive=True)
        for name in ("true_delta_e", "rh_mean", "rh_amp", "temp_mean", "temp_amp"):
            _require(name, getattr(self, name))
        _require("obs_sigma", self.obs_sigma, nonnegative=True)
        _require("m0", self.m0, nonnegative=True)
        if self.rh_amp < 0.0:
            raise ConfigError(f"must be >= 0, got {self.rh_amp}", field="rh_amp")
        if self.temp_amp < 0.0:
            raise ConfigError(f"must be >= 0, got {self.temp_amp}", field="temp_amp")
        if self.rh_mean - self.rh_amp < 0.0 or self.rh_mean + self.rh_amp > 100.0:
            raise ConfigError(f"rh_mean ± rh_amp must stay within [0, 100], got "
                              f"{self.rh_mean} ± {self.rh_amp}", field="rh_amp")
        if self.temp_mean - self.temp_amp <= 0.0:
            raise ConfigError(f"temp_mean - temp_amp must be > 0 K, got "
                              f"{self.temp_mean} - {self.temp_amp}", field="temp_amp")
        if self.anomaly is not None:
            if len(self.anomaly) != 3:
                raise ConfigError(f"expected (start, end, rh_offset), got {self.anomaly!r}", field="anomaly")
            try:
                start, end, offset = (float(v) for v in self.anomaly)
            except (TypeError, ValueError):
                raise ConfigError(f"expected numbers, got {self.anomaly!r}", field="anomaly")
            if not all(math.isfinite(v) for v in (start, end, offset)) or end < start:
                raise ConfigError(f"expected finite start <= end, got {self.anomaly!r}", field="anomaly")
            object.__setattr__(self, "anomaly", (start, end, offset))
        if self.split is not None:
            if isinstance(self.split, bool) or not isinstance(self.split, int) \
                    or not (0 < self.split < self.n_steps):
                raise ConfigError(f"must satisfy 0 < split < n_steps, got {self.split!r}", field="split")
        if self.true_time_lag is not None:
            _require("true_time_lag", self.true_time_lag, positive=True)

    @property
    def resolved_split(self) -> int:
        if self.split is not None:
            return self.split
        return min(max(int(round(self.n_steps * DEFAULT_SPLIT_FRACTION)), 1), self.n_steps - 1)

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    def to_dict(self) -> dict:
        out = {name: getattr(self, name) for name in self.field_names()}
        if out["anomaly"] is not None:
            out["anomaly"] = list(out["anomaly"])
        return out


def _require(name: str, value, positive: bool = False, nonnegative: bool = False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"must be a finite number, got {value!r}", field=name)
    if positive and value <= 0.0:
        raise ConfigError(f"must be > 0, got {value}", field=name)
    if nonnegative and value < 0.0:
        raise ConfigError(f"must be >= 0, got {value}", field=name)


def weather(cfg: SynthConfig, with_anomaly: bool = False) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Times, temperatures and humidities of the synthetic diurnal cycle.

    Args:
        cfg: Scenario
        with_anomaly: Add the wet-spell offset; the recorded weather leaves it out
    """
    times = np.arange(cfg.n_steps) * cfg.dt
    phase = np.sin(2.0 * np.pi * times / cfg.period)
    rh = cfg.rh_mean + cfg.rh_amp * phase
    if with_anomaly and cfg.anomaly is not None:
        start, end, offset = cfg.anomaly
        rh = np.where((times >= start) & (times < end), rh + offset, rh)
    rh = np.clip(rh, 0.0, 100.0)
    temp = cfg.temp_mean - cfg.temp_amp * phase
    return times, temp, rh


def synth(cfg: SynthConfig, model: ModelConfig) -> Tuple[TimeSeries, np.ndarray]:
    """
    Generate an observable series and the hidden truth trajectory.

    Args:
        cfg: Scenario
        model: Model configuration; its dt must equal cfg.dt

    Returns:
        (series, truth): observations are present only on the learning range;
        the series also carries the truth for scoring
    """
    if abs(model.dt - cfg.dt) > 1e-12:
        raise ConfigError(f"scenario dt {cfg.dt} differs from model dt {model.dt}", field="dt")

    times, temp, rh = weather(cfg)
    _, _, felt_rh = weather(cfg, with_anomaly=True)
    eqs = as_pairs(equilibria_array(temp, felt_rh))
    truth_model = ModelConfig(time_lag=cfg.true_time_lag or model.time_lag, dt=cfg.dt)
    truth = simulate(cfg.m0, cfg.true_delta_e, eqs[:-1], truth_model)

    split = cfg.resolved_split
    rng = np.random.default_rng(cfg.seed)
    noise = rng.normal(0.0, 1.0, cfg.n_steps) * cfg.obs_sigma
    obs = np.full(cfg.n_steps, np.nan)
    # a sensor cannot read below 0 %; AtmosphericSample rejects negative obs
    obs[:split] = np.maximum(truth[:split] + noise[:split], 0.0)

    series = TimeSeries.from_arrays(times, temp, rh, obs, split, truth=truth)
    logger.info(f"Synthesized {cfg.n_steps} steps (split {split}, true dE {cfg.true_delta_e}, "
                f"seed {cfg.seed})")
    return series, truth
