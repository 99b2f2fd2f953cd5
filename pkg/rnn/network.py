"""
Linear recurrent network that maps equilibrium features (E_d, E_w) to fuel
moisture.

    hidden_{k+1} = W_hid hidden_k + W_in x_k + b_hid
    output_k     = w_out hidden_{k+1} + b_out

With one hidden unit, W_hid = exp(-dt/T), W_in = (1 - exp(-dt/T)) (1/2, 1/2)
and w_out = 1, the recurrence is exactly the time-lag step
m_{k+1} = exp(-dt/T) m_k + (1 - exp(-dt/T)) E_k driven by the mean equilibrium.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_TIMESCALES, RANDOM_INIT_SCALE
from errors import DomainError
from model.moisture import EquilibriumPair, ModelConfig

WEIGHT_FIELDS = ("w_in", "w_hid", "b_hid", "w_out", "b_out")


class InitMode(Enum):
    IDENTICAL = "identical"
    MULTI_TIMESCALE = "multi-timescale"
    RANDOM = "random"


@dataclass(frozen=True)
class RnnWeights:
    """
    Weights of the linear recurrent network; arrays are read-only.

    The same container holds gradients, one entry per weight.
    """
    w_in: np.ndarray
    w_hid: np.ndarray
    b_hid: np.ndarray
    w_out: np.ndarray
    b_out: float

    def __post_init__(self):
        w_hid = np.array(self.w_hid, dtype=float, ndmin=2)
        h = w_hid.shape[0]
        if h < 1 or w_hid.shape != (h, h):
            raise DomainError(f"recurrent matrix must be square h x h, got {w_hid.shape}", field="w_hid")
        shapes = {"w_in": (h, 2), "b_hid": (h,), "w_out": (1, h)}
        arrays = {"w_hid": w_hid}
        for name, shape in shapes.items():
            arr = np.array(getattr(self, name), dtype=float).reshape(shape) \
                if np.size(getattr(self, name)) == int(np.prod(shape)) else None
            if arr is None:
                raise DomainError(f"expected {int(np.prod(shape))} values for shape {shape}", field=name)
            arrays[name] = arr
        for name, arr in arrays.items():
            if not np.all(np.isfinite(arr)):
                raise DomainError("weights must be finite", field=name)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        b_out = float(np.asarray(self.b_out, dtype=float).reshape(-1)[0])
        if not math.isfinite(b_out):
            raise DomainError("weights must be finite", field="b_out")
        object.__setattr__(self, "b_out", b_out)

    @property
    def h(self) -> int:
        return self.w_hid.shape[0]

    def update(self, grad: "RnnWeights", lr: float) -> "RnnWeights":
        """One plain gradient-descent step, returned as new weights."""
        return RnnWeights(
            w_in=self.w_in - lr * grad.w_in,
            w_hid=self.w_hid - lr * grad.w_hid,
            b_hid=self.b_hid - lr * grad.b_hid,
            w_out=self.w_out - lr * grad.w_out,
            b_out=self.b_out - lr * grad.b_out,
        )

    def flatten(self) -> np.ndarray:
        return np.concatenate([np.ravel(getattr(self, name)) for name in WEIGHT_FIELDS])

    @classmethod
    def unflatten(cls, vector: np.ndarray, h: int) -> "RnnWeights":
        vector = np.asarray(vector, dtype=float)
        sizes = [2 * h, h * h, h, h, 1]
        parts = np.split(vector, np.cumsum(sizes)[:-1])
        return cls(w_in=parts[0].reshape(h, 2), w_hid=parts[1].reshape(h, h),
                   b_hid=parts[2], w_out=parts[3].reshape(1, h), b_out=float(parts[4][0]))

    def norm(self) -> float:
        return float(np.linalg.norm(self.flatten()))


# ============================================================================
# INITIALIZATION
# ============================================================================

def init_euler(h: int, cfg: ModelConfig, mode: InitMode = InitMode.MULTI_TIMESCALE,
               timescales: Optional[Sequence[float]] = None) -> RnnWeights:
    """
    Euler-equivalent initialization: every hidden unit is an exact time-lag model.

    Args:
        h: Hidden width
        cfg: Model configuration (dt and, for IDENTICAL, the time lag)
        mode: IDENTICAL gives every unit cfg.time_lag; MULTI_TIMESCALE uses
            one time constant per unit
        timescales: Time constants in hours, length h (MULTI_TIMESCALE)

    Raises:
        DomainError: for h < 1 or invalid timescales
    """
    if h < 1:
        raise DomainError(f"hidden width must be >= 1, got {h}", field="h")
    if mode is InitMode.IDENTICAL:
        lags = np.full(h, cfg.time_lag)
    elif mode is InitMode.MULTI_TIMESCALE:
        if timescales is None or len(timescales) != h:
            raise DomainError(f"need {h} timescales, got {timescales!r}", field="timescales")
        lags = np.asarray(timescales, dtype=float)
        if not np.all(np.isfinite(lags) & (lags > 0.0)):
            raise DomainError(f"timescales must be finite and > 0, got {list(lags)}", field="timescales")
    else:
        raise DomainError(f"not an Euler initialization mode: {mode}", field="init_mode")

    decay = np.exp(-cfg.dt / lags)
    gain = 1.0 - decay
    return RnnWeights(
        w_in=np.column_stack([0.5 * gain, 0.5 * gain]),
        w_hid=np.diag(decay),
        b_hid=np.zeros(h),
        w_out=np.full((1, h), 1.0 / h),
        b_out=0.0,
    )


def init_random(h: int, seed: int, scale: float = RANDOM_INIT_SCALE) -> RnnWeights:
    """Generic small random initialization, seeded."""
    if h < 1:
        raise DomainError(f"hidden width must be >= 1, got {h}", field="h")
    rng = np.random.default_rng(seed)
    return RnnWeights(
        w_in=rng.normal(0.0, scale, (h, 2)),
        w_hid=rng.normal(0.0, scale, (h, h)),
        b_hid=np.zeros(h),
        w_out=rng.normal(0.0, scale, (1, h)),
        b_out=0.0,
    )


def default_timescales(h: int, time_lag: float) -> Tuple[float, ...]:
    """Time constants for MULTI_TIMESCALE when none are given."""
    if h == len(DEFAULT_TIMESCALES):
        return tuple(DEFAULT_TIMESCALES)
    if h == 1:
        return (float(time_lag),)
    return tuple(float(t) for t in np.geomspace(DEFAULT_TIMESCALES[0], DEFAULT_TIMESCALES[-1], h))


# ============================================================================
# EVALUATION
# ============================================================================

def _input_vector(x) -> np.ndarray:
    if isinstance(x, EquilibriumPair):
        return np.array([x.ed, x.ew])
    return np.asarray(x, dtype=float).reshape(2)


def _input_matrix(inputs) -> np.ndarray:
    if len(inputs) == 0:
        return np.empty((0, 2))
    if isinstance(inputs, np.ndarray):
        return inputs.reshape(len(inputs), 2).astype(float, copy=False)
    return np.array([_input_vector(x) for x in inputs])


def forward(w: RnnWeights, hidden: np.ndarray, x) -> Tuple[np.ndarray, float]:
    """
    One recurrent step with linear activation.

    Returns:
        (new hidden state, output)
    """
    hidden_next = w.w_hid @ hidden + w.w_in @ _input_vector(x) + w.b_hid
    return hidden_next, float(w.w_out[0] @ hidden_next + w.b_out)


def initial_output(w: RnnWeights, h0: np.ndarray) -> float:
    """Output read from the initial hidden state before any input."""
    return float(w.w_out[0] @ np.asarray(h0, dtype=float) + w.b_out)


def evaluate_sequence(w: RnnWeights, h0: np.ndarray, inputs) -> np.ndarray:
    """Stateless evaluation over a full input sequence, one output per input."""
    xs = _input_matrix(inputs)
    hidden = np.asarray(h0, dtype=float)
    out = np.empty(len(xs))
    for k, x in enumerate(xs):
        hidden, out[k] = forward(w, hidden, x)
    return out


def initial_hidden(h: int, features: np.ndarray, observations: Sequence[Optional[float]]) -> np.ndarray:
    """
    Initial hidden state: the first available observation in every component,
    or the mean of (E_d, E_w) at step 0 when there is none.
    """
    for value in observations:
        if value is not None and not np.isnan(value):
            return np.full(h, float(value))
    first = _input_matrix(features)[0]
    return np.full(h, 0.5 * (first[0] + first[1]))
