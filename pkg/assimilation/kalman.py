"""
Augmented extended Kalman filter over u = (m, dE).

The state carries the fuel moisture m and the equilibrium correction dE, which
is constant under the model (d dE/dt = 0) and becomes identifiable through the
cross-covariance the forecast builds between m and dE. Observations are scalar
moisture readings with observation operator H = [1, 0].
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_Q_M, DEFAULT_Q_DELTA_E, DEFAULT_R, DEFAULT_P0
from errors import DomainError
from model.moisture import (
    EquilibriumPair,
    ModelConfig,
    Regime,
    select_regime,
    simulate,
    step,
)

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
PSD_TOL = 1e-10
SPACING_TOL = 1e-9


@dataclass(frozen=True)
class AugmentedState:
    """Filter state: moisture m and equilibrium correction delta_e, percent."""
    m: float
    delta_e: float

    def __post_init__(self):
        if not (math.isfinite(self.m) and math.isfinite(self.delta_e)):
            raise DomainError(f"state must be finite, got ({self.m}, {self.delta_e})", field="state")

    def as_vector(self) -> np.ndarray:
        return np.array([self.m, self.delta_e])


@dataclass(frozen=True)
class FilterConfig:
    """Process noise per step, observation noise and initial covariance diagonal."""
    q_m: float = DEFAULT_Q_M
    q_delta_e: float = DEFAULT_Q_DELTA_E
    r: float = DEFAULT_R
    p0: Tuple[float, float] = DEFAULT_P0

    def __post_init__(self):
        for name in ("q_m", "q_delta_e"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise DomainError(f"must be a finite value >= 0, got {value}", field=name)
        if not (math.isfinite(self.r) and self.r > 0.0):
            raise DomainError(f"must be a finite value > 0, got {self.r}", field="r")
        if len(self.p0) != 2 or not all(math.isfinite(p) and p >= 0.0 for p in self.p0):
            raise DomainError(f"must be two finite values >= 0, got {self.p0}", field="p0")

    @property
    def process_noise(self) -> np.ndarray:
        return np.diag([self.q_m, self.q_delta_e])

    def initial_covariance(self) -> np.ndarray:
        return np.diag([float(self.p0[0]), float(self.p0[1])])


def _symmetrize(cov: np.ndarray) -> np.ndarray:
    return 0.5 * (cov + cov.T)


def check_covariance(cov: np.ndarray):
    """
    Validate a 2x2 error covariance.

    Raises:
        DomainError: if the matrix is not 2x2, not finite, not symmetric or
            has an eigenvalue below -1e-10
    """
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2, 2) or not np.all(np.isfinite(cov)):
        raise DomainError(f"expected a finite 2x2 matrix, got {cov!r}", field="cov")
    scale = float(np.max(np.abs(cov)))
    if abs(cov[0, 1] - cov[1, 0]) > SYMMETRY_TOL * scale:
        raise DomainError("covariance is not symmetric", field="cov")
    if np.min(np.linalg.eigvalsh(cov)) < -PSD_TOL:
        raise DomainError("covariance is not positive semidefinite", field="cov")


# ============================================================================
# FILTER STEPS
# ============================================================================

def jacobian(state: AugmentedState, eq: EquilibriumPair, cfg: ModelConfig) -> np.ndarray:
    """
    Jacobian of (m, dE) -> (step(m, dE), dE) in the regime frozen at the state.

    Active regimes give [[a, 1 - a], [0, 1]] with a = exp(-dt/T); the dead
    zone gives the identity.
    """
    if select_regime(state.m, eq, state.delta_e) is Regime.DEAD:
        return np.eye(2)
    a = cfg.decay
    return np.array([[a, 1.0 - a],
                     [0.0, 1.0]])


def forecast_step(state: AugmentedState, cov: np.ndarray, eq: EquilibriumPair,
                  cfg: ModelConfig, fcfg: FilterConfig) -> Tuple[AugmentedState, np.ndarray]:
    """Time update: propagate the state through the model and the covariance through J."""
    jac = jacobian(state, eq, cfg)
    m_next = step(state.m, state.delta_e, eq, cfg)
    cov_next = jac @ cov @ jac.T + fcfg.process_noise
    return AugmentedState(m_next, state.delta_e), _symmetrize(cov_next)


def analysis_step(state: AugmentedState, cov: np.ndarray, obs: float,
                  r: float) -> Tuple[AugmentedState, np.ndarray]:
    """
    Measurement update with a scalar moisture observation.

    Args:
        state: Forecast state
        cov: Forecast covariance
        obs: Observed moisture, percent
        r: Observation noise variance

    Raises:
        DomainError: for a non-finite observation or r <= 0
    """
    if obs is None or not math.isfinite(obs):
        raise DomainError(f"observation must be finite, got {obs}", field="obs")
    if not (math.isfinite(r) and r > 0.0):
        raise DomainError(f"must be a finite value > 0, got {r}", field="r")

    innovation_var = cov[0, 0] + r
    gain = cov[:, 0] / innovation_var
    innovation = obs - state.m
    updated = state.as_vector() + gain * innovation
    # (I - K H) P with H = [1, 0]
    cov_next = cov - np.outer(gain, cov[0, :])
    return AugmentedState(float(updated[0]), float(updated[1])), _symmetrize(cov_next)


# ============================================================================
# DRIVERS
# ============================================================================

@dataclass
class LearningResult:
    """Per-step filter output of the learning phase."""
    states: List[AugmentedState]
    covariances: List[np.ndarray]
    analyses: int

    @property
    def m(self) -> np.ndarray:
        return np.array([s.m for s in self.states])

    @property
    def delta_e(self) -> np.ndarray:
        return np.array([s.delta_e for s in self.states])

    @property
    def p00(self) -> np.ndarray:
        return np.array([c[0, 0] for c in self.covariances])

    @property
    def p11(self) -> np.ndarray:
        return np.array([c[1, 1] for c in self.covariances])

    @property
    def final(self) -> Tuple[AugmentedState, np.ndarray]:
        return self.states[-1], self.covariances[-1]


def _initial_state(eqs: Sequence[EquilibriumPair], observations: Sequence[Optional[float]]) -> AugmentedState:
    first = observations[0]
    m0 = first if first is not None else eqs[0].mean
    return AugmentedState(float(m0), 0.0)


def run_learning(series, cfg: ModelConfig, fcfg: FilterConfig,
                 state0: Optional[AugmentedState] = None) -> List[Tuple[AugmentedState, np.ndarray]]:
    """
    Assimilate the learning range of a series.

    Step 0 is analysed when it carries an observation; every later step is a
    forecast with the previous step's equilibria, followed by an analysis when
    an observation exists.

    Args:
        series: dataset.series.TimeSeries
        cfg: Model configuration; cfg.dt must match the series spacing
        fcfg: Filter tuning
        state0: Optional initial state (default: first observation or mean
            equilibrium at step 0, with dE = 0)

    Returns:
        One (state, covariance) pair per learning-range timestep

    Raises:
        DomainError: for non-uniform spacing or spacing different from cfg.dt
    """
    result = summarize_learning(series, cfg, fcfg, state0)
    return list(zip(result.states, result.covariances))


def summarize_learning(series, cfg: ModelConfig, fcfg: FilterConfig,
                       state0: Optional[AugmentedState] = None) -> LearningResult:
    """Same as run_learning, returned as a LearningResult with array accessors."""
    series.check_uniform()
    if abs(series.dt - cfg.dt) > SPACING_TOL:
        raise DomainError(f"series spacing {series.dt} h differs from model dt {cfg.dt} h", field="dt")

    learning = series.learning()
    eqs = learning.features()
    observations = learning.observations()

    state = state0 or _initial_state(eqs, observations)
    cov = fcfg.initial_covariance()
    analyses = 0
    if observations[0] is not None:
        state, cov = analysis_step(state, cov, observations[0], fcfg.r)
        analyses += 1

    states, covariances = [state], [cov]
    for k in range(1, len(eqs)):
        state, cov = forecast_step(state, cov, eqs[k - 1], cfg, fcfg)
        if observations[k] is not None:
            state, cov = analysis_step(state, cov, observations[k], fcfg.r)
            analyses += 1
        states.append(state)
        covariances.append(cov)

    logger.info(f"Filter learning: {len(states)} steps, {analyses} analyses, "
                f"final dE = {state.delta_e:.4f}")
    return LearningResult(states, covariances, analyses)


def run_forecast(state0: AugmentedState, eqs: Sequence[EquilibriumPair],
                 cfg: ModelConfig) -> np.ndarray:
    """Run the model without the filter from the last learning state."""
    if len(eqs) == 0:
        return np.array([state0.m])
    return simulate(state0.m, state0.delta_e, eqs, cfg)
