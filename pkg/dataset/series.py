"""
Uniformly spaced weather/moisture time series with a learning/forecast split.

Observations in the forecast range are kept for scoring only: the accessors
that models use report them as absent, since in a real forecast the sensor
data are still in the future.
"""
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from errors import DomainError
from model.moisture import AtmosphericSample, EquilibriumPair, equilibria, equilibria_array

SPACING_TOL = 1e-9


@dataclass(frozen=True)
class SeriesRange:
    """A contiguous slice of a TimeSeries, as seen by a model."""
    samples: Tuple[AtmosphericSample, ...]
    start: int
    obs_visible: bool
    truth: Optional[np.ndarray] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.samples])

    def features(self) -> List[EquilibriumPair]:
        return [equilibria(s.temp, s.rh) for s in self.samples]

    def feature_matrix(self) -> np.ndarray:
        return equilibria_array([s.temp for s in self.samples], [s.rh for s in self.samples])

    def observations(self) -> List[Optional[float]]:
        if not self.obs_visible:
            return [None] * len(self.samples)
        return [s.obs for s in self.samples]


@dataclass(frozen=True)
class TimeSeries:
    """
    Ordered weather samples with uniform spacing dt (hours) and a split index.

    Samples [0, split) form the learning phase, [split, n) the forecast phase.
    `truth` optionally holds the hidden moisture trajectory of synthetic runs.
    """
    samples: Tuple[AtmosphericSample, ...]
    dt: float
    split: int
    truth: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        n = len(self.samples)
        if n < 2:
            raise DomainError(f"a series needs at least 2 samples, got {n}", field="samples")
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise DomainError(f"must be a finite value > 0, got {self.dt}", field="dt")
        if not (0 < self.split < n):
            raise DomainError(f"must satisfy 0 < split < {n}, got {self.split}", field="split")
        if self.truth is not None:
            truth = np.asarray(self.truth, dtype=float)
            if truth.shape != (n,):
                raise DomainError(f"truth length {truth.shape} does not match {n} samples", field="truth")
            object.__setattr__(self, "truth", truth)
        self.check_uniform()

    def __len__(self) -> int:
        return len(self.samples)

    def check_uniform(self):
        """
        Raises:
            DomainError: naming the first sample whose spacing differs from dt
        """
        times = self.times
        gaps = np.diff(times)
        bad = np.flatnonzero(np.abs(gaps - self.dt) > SPACING_TOL)
        if bad.size:
            k = int(bad[0]) + 1
            raise DomainError(
                f"non-uniform spacing at sample {k}: t={times[k]} follows t={times[k - 1]}, "
                f"expected step {self.dt}", field="time")

    # ---------- column access ----------

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.samples])

    @property
    def temps(self) -> np.ndarray:
        return np.array([s.temp for s in self.samples])

    @property
    def rhs(self) -> np.ndarray:
        return np.array([s.rh for s in self.samples])

    @property
    def split_time(self) -> float:
        return self.samples[self.split].time

    def features(self) -> List[EquilibriumPair]:
        return features(self)

    def feature_matrix(self) -> np.ndarray:
        return equilibria_array(self.temps, self.rhs)

    def observations(self) -> List[Optional[float]]:
        """Model-visible observations: learning range only."""
        return [s.obs if k < self.split else None for k, s in enumerate(self.samples)]

    def observation_array(self) -> np.ndarray:
        """Model-visible observations with NaN for absent values."""
        return np.array([np.nan if o is None else o for o in self.observations()])

    def holdout_observations(self) -> List[Optional[float]]:
        """Forecast-range observations kept back for scoring."""
        return [s.obs for s in self.samples[self.split:]]

    def all_observations(self) -> np.ndarray:
        """Every stored observation, learning and held out, NaN when absent."""
        return np.array([np.nan if s.obs is None else s.obs for s in self.samples])

    # ---------- ranges ----------

    def learning(self) -> SeriesRange:
        truth = None if self.truth is None else self.truth[:self.split]
        return SeriesRange(self.samples[:self.split], 0, True, truth)

    def forecast(self) -> SeriesRange:
        truth = None if self.truth is None else self.truth[self.split:]
        return SeriesRange(self.samples[self.split:], self.split, False, truth)

    def with_split(self, split: int) -> "TimeSeries":
        return replace(self, split=split)

    def with_truth(self, truth: Optional[Sequence[float]]) -> "TimeSeries":
        return replace(self, truth=None if truth is None else np.asarray(truth, dtype=float))

    @classmethod
    def from_arrays(cls, times: Sequence[float], temps: Sequence[float], rhs: Sequence[float],
                    obs: Sequence[Optional[float]], split: int,
                    truth: Optional[Sequence[float]] = None) -> "TimeSeries":
        """Build a series from columns; obs entries may be None or NaN."""
        times = np.asarray(times, dtype=float)
        samples = []
        for t, temp, rh, o in zip(times, temps, rhs, obs):
            if o is not None and np.isnan(o):
                o = None
            samples.append(AtmosphericSample(float(t), float(temp), float(rh),
                                             None if o is None else float(o)))
        dt = float(times[1] - times[0]) if len(times) > 1 else float("nan")
        return cls(tuple(samples), dt, split, truth)


def features(series: TimeSeries) -> List[EquilibriumPair]:
    """Element-wise equilibria (E_d, E_w), one pair per sample."""
    return [equilibria(s.temp, s.rh) for s in series.samples]


def split(series: TimeSeries) -> Tuple[SeriesRange, SeriesRange]:
    """Learning range [0, split) and forecast range [split, n)."""
    return series.learning(), series.forecast()


def as_pairs(matrix: np.ndarray) -> List[EquilibriumPair]:
    """Convert an (n, 2) feature matrix to EquilibriumPair values."""
    return [EquilibriumPair(float(ed), float(ew)) for ed, ew in np.asarray(matrix, dtype=float)]
