"""
Time-lag fuel moisture model.

Computes drying and wetting equilibria from temperature and relative humidity,
and advances the moisture of a single dead-fuel class over one interval with
the exact solution of the three-regime time-lag equation:

    dm/dt = (Ew + dE - m) / T   if m(t_k) < Ew + dE       (wetting)
    dm/dt = (Ed + dE - m) / T   if m(t_k) > Ed + dE       (drying)
    dm/dt = 0                   otherwise                 (dead zone)

The regime is chosen from the moisture at the start of the interval and held
for the whole interval, so each step is a closed-form exponential relaxation.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from config import DEFAULT_TIME_LAG, DEFAULT_DT
from errors import DomainError

# 21.1 degC in kelvin, reference temperature of the equilibrium formulas
REFERENCE_TEMP_K = 21.1 + 273.15


# ============================================================================
# DOMAIN TYPES
# ============================================================================

@dataclass(frozen=True)
class AtmosphericSample:
    """One timestamped weather record with an optional moisture observation."""
    time: float
    temp: float
    rh: float
    obs: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.time):
            raise DomainError(f"must be finite, got {self.time}", field="time")
        _check_weather(self.temp, self.rh)
        if self.obs is not None and not (math.isfinite(self.obs) and self.obs >= 0.0):
            raise DomainError(f"must be a finite value >= 0, got {self.obs}", field="obs")


@dataclass(frozen=True)
class EquilibriumPair:
    """Drying and wetting equilibrium moisture, percent of dry mass."""
    ed: float
    ew: float

    @property
    def mean(self) -> float:
        return 0.5 * (self.ed + self.ew)


@dataclass(frozen=True)
class ModelConfig:
    """Time lag T and timestep dt of the moisture model, both in hours."""
    time_lag: float = DEFAULT_TIME_LAG
    dt: float = DEFAULT_DT

    def __post_init__(self):
        for name in ("time_lag", "dt"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"must be a finite value > 0, got {value}", field=name)

    @property
    def decay(self) -> float:
        """Fraction of the distance to equilibrium left after one step."""
        return math.exp(-self.dt / self.time_lag)


class Regime(Enum):
    DRYING = "drying"
    WETTING = "wetting"
    DEAD = "dead"


@dataclass(frozen=True)
class EquilibriumCoefficients:
    """
    Coefficients of the fine-fuel equilibrium moisture formulas

        E = a * H**b + c * exp(0.1 H) + 0.18 * (Tref - T) * (1 - exp(-0.115 H))

    for drying (d_*) and wetting (w_*). Swapping the instance swaps the variant.
    """
    d_scale: float = 0.924
    d_power: float = 0.679
    d_exp: float = 0.000499
    w_scale: float = 0.618
    w_power: float = 0.753
    w_exp: float = 0.000454
    temp_coeff: float = 0.18
    humidity_rate: float = 0.115
    reference_temp: float = REFERENCE_TEMP_K


VAN_WAGNER = EquilibriumCoefficients()


# ============================================================================
# EQUILIBRIA
# ============================================================================

def _check_weather(temp: float, rh: float):
    if not (math.isfinite(temp) and temp > 0.0):
        raise DomainError(f"temperature must be a finite value > 0 K, got {temp}", field="temp")
    if not (math.isfinite(rh) and 0.0 <= rh <= 100.0):
        raise DomainError(f"relative humidity must lie in [0, 100], got {rh}", field="rh")


def equilibria(temp: float, rh: float,
               coeffs: EquilibriumCoefficients = VAN_WAGNER) -> EquilibriumPair:
    """
    Drying and wetting equilibria for one weather sample.

    Args:
        temp: Air temperature, kelvin
        rh: Relative humidity, percent in [0, 100]
        coeffs: Formula coefficients

    Returns:
        EquilibriumPair with both values clamped at 0

    Raises:
        DomainError: naming 'temp' or 'rh' when out of range
    """
    _check_weather(temp, rh)
    temp_term = coeffs.temp_coeff * (coeffs.reference_temp - temp) * \
        (1.0 - math.exp(-coeffs.humidity_rate * rh))
    wet_air = math.exp(0.1 * rh)
    ed = coeffs.d_scale * rh ** coeffs.d_power + coeffs.d_exp * wet_air + temp_term
    ew = coeffs.w_scale * rh ** coeffs.w_power + coeffs.w_exp * wet_air + temp_term
    return EquilibriumPair(ed=max(ed, 0.0), ew=max(ew, 0.0))


def equilibria_array(temps: Sequence[float], rhs: Sequence[float],
                     coeffs: EquilibriumCoefficients = VAN_WAGNER) -> np.ndarray:
    """
    Vectorised equilibria.

    Returns:
        Array of shape (n, 2) with columns (ed, ew)
    """
    temps = np.asarray(temps, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if temps.shape != rhs.shape:
        raise DomainError(f"temperature and humidity lengths differ: {temps.shape} vs {rhs.shape}")
    if not np.all(np.isfinite(temps) & (temps > 0.0)):
        raise DomainError("temperature must be finite and > 0 K", field="temp")
    if not np.all(np.isfinite(rhs) & (rhs >= 0.0) & (rhs <= 100.0)):
        raise DomainError("relative humidity must lie in [0, 100]", field="rh")

    temp_term = coeffs.temp_coeff * (coeffs.reference_temp - temps) * \
        (1.0 - np.exp(-coeffs.humidity_rate * rhs))
    wet_air = np.exp(0.1 * rhs)
    ed = coeffs.d_scale * rhs ** coeffs.d_power + coeffs.d_exp * wet_air + temp_term
    ew = coeffs.w_scale * rhs ** coeffs.w_power + coeffs.w_exp * wet_air + temp_term
    return np.column_stack([np.maximum(ed, 0.0), np.maximum(ew, 0.0)])


# ============================================================================
# TIME-LAG DYNAMICS
# ============================================================================

def select_regime(m: float, eq: EquilibriumPair, delta_e: float) -> Regime:
    """Regime of the interval starting at moisture m; band edges count as dead."""
    if m < eq.ew + delta_e:
        return Regime.WETTING
    if m > eq.ed + delta_e:
        return Regime.DRYING
    return Regime.DEAD


def regime_target(regime: Regime, eq: EquilibriumPair, delta_e: float) -> Optional[float]:
    """Equilibrium the moisture relaxes toward, None in the dead zone."""
    if regime is Regime.DRYING:
        return eq.ed + delta_e
    if regime is Regime.WETTING:
        return eq.ew + delta_e
    return None


def step(m: float, delta_e: float, eq: EquilibriumPair, cfg: ModelConfig) -> float:
    """
    Advance moisture by one interval of length cfg.dt.

    Args:
        m: Moisture at the start of the interval, percent
        delta_e: Equilibrium correction added to both equilibria
        eq: Equilibria for the interval
        cfg: Time lag and timestep

    Returns:
        Moisture at the end of the interval
    """
    target = regime_target(select_regime(m, eq, delta_e), eq, delta_e)
    if target is None:
        return m
    return target + (m - target) * cfg.decay


def simulate(m0: float, delta_e: float, eqs: Sequence[EquilibriumPair],
             cfg: ModelConfig) -> np.ndarray:
    """
    Run the model over a sequence of equilibria.

    Returns:
        Array of len(eqs) + 1 moisture values starting with m0

    Raises:
        DomainError: if eqs is empty
    """
    if len(eqs) == 0:
        raise DomainError("equilibrium sequence is empty", field="eqs")
    out = np.empty(len(eqs) + 1)
    out[0] = m = m0
    for k, eq in enumerate(eqs):
        m = step(m, delta_e, eq, cfg)
        out[k + 1] = m
    return out
