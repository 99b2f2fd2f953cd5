"""
Stateful training of the linear recurrent network.

Each training sample is a window of s consecutive inputs whose loss is the
squared error of the output at the window's last step. Gradients are exact
back-propagation through the s steps of the window; the hidden state entering
the window is treated as a constant (truncation at the window boundary).

Windows are visited in time order with stride 1 and the hidden state is
carried forward one step per window, so the network always starts a window
from the state it reached on the preceding data. The state is reset at the
start of every epoch. Updates are plain SGD, one per window with a target.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import (
    DEFAULT_WINDOW, DEFAULT_LR, DEFAULT_EPOCHS, DEFAULT_SEED,
    DEFAULT_INIT_MODE, DEFAULT_HIDDEN,
)
from errors import DomainError, TrainingError
from model.moisture import ModelConfig
from rnn.network import (
    InitMode, RnnWeights, _input_matrix, default_timescales, forward, init_euler, init_random,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    """Training settings; timescales are used by the multi-timescale initialization."""
    window: int = DEFAULT_WINDOW
    lr: float = DEFAULT_LR
    epochs: int = DEFAULT_EPOCHS
    seed: int = DEFAULT_SEED
    init_mode: InitMode = InitMode(DEFAULT_INIT_MODE)
    timescales: Optional[Tuple[float, ...]] = None
    hidden: int = DEFAULT_HIDDEN

    def __post_init__(self):
        if isinstance(self.init_mode, str):
            try:
                object.__setattr__(self, "init_mode", InitMode(self.init_mode))
            except ValueError:
                raise DomainError(f"unknown mode {self.init_mode!r}", field="init_mode")
        if not isinstance(self.window, int) or self.window < 1:
            raise DomainError(f"must be an integer >= 1, got {self.window!r}", field="window")
        if not isinstance(self.epochs, int) or self.epochs < 1:
            raise DomainError(f"must be an integer >= 1, got {self.epochs!r}", field="epochs")
        if not isinstance(self.hidden, int) or self.hidden < 1:
            raise DomainError(f"must be an integer >= 1, got {self.hidden!r}", field="hidden")
        # lr = 0 is accepted to evaluate the loss of fixed weights
        if not (math.isfinite(self.lr) and self.lr >= 0.0):
            raise DomainError(f"must be a finite value >= 0, got {self.lr}", field="lr")
        if self.timescales is not None:
            object.__setattr__(self, "timescales", tuple(float(t) for t in self.timescales))

    def resolved_timescales(self, time_lag: float) -> Tuple[float, ...]:
        return self.timescales or default_timescales(self.hidden, time_lag)

    def initial_weights(self, cfg: ModelConfig) -> RnnWeights:
        """Initial weights for this configuration."""
        if self.init_mode is InitMode.RANDOM:
            return init_random(self.hidden, self.seed)
        return init_euler(self.hidden, cfg, self.init_mode, self.resolved_timescales(cfg.time_lag))

    def to_dict(self) -> dict:
        return {
            "window": self.window, "lr": self.lr, "epochs": self.epochs, "seed": self.seed,
            "init_mode": self.init_mode.value, "hidden": self.hidden,
            "timescales": list(self.timescales) if self.timescales else None,
        }


# ============================================================================
# GRADIENT
# ============================================================================

def _window_gradient(w: RnnWeights, h0: np.ndarray, xs: np.ndarray,
                     target: float) -> Tuple[RnnWeights, float, np.ndarray]:
    """Gradient, output and first-step hidden state of one window."""
    hiddens = [np.asarray(h0, dtype=float)]
    for x in xs:
        hiddens.append(w.w_hid @ hiddens[-1] + w.w_in @ x + w.b_hid)
    output = float(w.w_out[0] @ hiddens[-1] + w.b_out)
    d_out = 2.0 * (output - target)

    g_w_out = d_out * hiddens[-1][np.newaxis, :]
    delta = d_out * w.w_out[0]
    g_w_hid = np.zeros_like(w.w_hid)
    g_w_in = np.zeros_like(w.w_in)
    g_b_hid = np.zeros_like(w.b_hid)
    for t in range(len(xs), 0, -1):
        g_w_hid += np.outer(delta, hiddens[t - 1])
        g_w_in += np.outer(delta, xs[t - 1])
        g_b_hid += delta
        delta = w.w_hid.T @ delta

    grad = RnnWeights(w_in=g_w_in, w_hid=g_w_hid, b_hid=g_b_hid, w_out=g_w_out, b_out=d_out)
    return grad, output, hiddens[1]


def bptt_gradient(w: RnnWeights, h0: np.ndarray, inputs, target: float) -> RnnWeights:
    """
    Exact gradient of (output_s - target)^2 over a window of s inputs.

    Args:
        w: Current weights
        h0: Hidden state entering the window, held constant
        inputs: s EquilibriumPair values or an (s, 2) array
        target: Moisture target for the window's last output

    Raises:
        DomainError: for an empty window
    """
    xs = _input_matrix(inputs)
    if len(xs) < 1:
        raise DomainError("window must contain at least one input", field="inputs")
    grad, _, _ = _window_gradient(w, h0, xs, float(target))
    return grad


def window_loss(w: RnnWeights, h0: np.ndarray, inputs, target: float) -> float:
    """Squared error at the last output of a window."""
    hidden = np.asarray(h0, dtype=float)
    output = 0.0
    for x in _input_matrix(inputs):
        hidden, output = forward(w, hidden, x)
    return (output - target) ** 2


# ============================================================================
# TRAINING LOOP
# ============================================================================

def train(w0: RnnWeights, features, targets: Sequence[Optional[float]],
          tcfg: TrainConfig, cfg: ModelConfig,
          h0: Optional[np.ndarray] = None) -> Tuple[RnnWeights, List[float]]:
    """
    Train with stateful windows and plain SGD.

    Args:
        w0: Initial weights
        features: Inputs, n EquilibriumPair values or an (n, 2) array
        targets: n targets aligned with the outputs (None or NaN = absent)
        tcfg: Training settings
        cfg: Model configuration (kept for the weights' timestep)
        h0: Hidden state at the start of each epoch (default: zeros)

    Returns:
        (trained weights, mean window loss per epoch)

    Raises:
        DomainError: length mismatch, or no window ends at a present target
        TrainingError: if the loss or weights become non-finite
    """
    xs = _input_matrix(features)
    ys = np.array([np.nan if t is None else float(t) for t in targets])
    if len(xs) != len(ys):
        raise DomainError(f"{len(xs)} features but {len(ys)} targets", field="targets")
    s = tcfg.window
    if len(xs) < s:
        raise DomainError(f"series of {len(xs)} steps is shorter than the window {s}", field="window")
    if not np.any(~np.isnan(ys[s - 1:])):
        raise DomainError("no training window ends at a present target", field="targets")

    start = np.zeros(w0.h) if h0 is None else np.asarray(h0, dtype=float)
    w = w0
    history = []
    for epoch in range(tcfg.epochs):
        carry = start
        losses = []
        for k in range(len(xs) - s + 1):
            window = xs[k:k + s]
            target = ys[k + s - 1]
            if np.isnan(target):
                carry, _ = forward(w, carry, window[0])
                continue
            try:
                grad, output, carry_next = _window_gradient(w, carry, window, target)
                loss = (output - target) ** 2
                if not math.isfinite(loss):
                    raise DomainError(f"loss is {loss}")
                if tcfg.lr > 0.0:
                    w_next = w.update(grad, tcfg.lr)
            except DomainError as e:
                raise TrainingError(f"training diverged in epoch {epoch + 1} at window {k}: {e}") from e
            losses.append(loss)
            carry = carry_next
            if tcfg.lr > 0.0:
                w = w_next
        history.append(float(np.mean(losses)))
        logger.info(f"Epoch {epoch + 1}/{tcfg.epochs}: mean loss {history[-1]:.6g}")

    return w, history
