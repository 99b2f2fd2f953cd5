"""Linear recurrent network: Euler-equivalent initialization, BPTT training and evaluation."""
from rnn.network import (
    InitMode, RnnWeights, WEIGHT_FIELDS, init_euler, init_random, default_timescales,
    forward, initial_output, evaluate_sequence, initial_hidden,
)
from rnn.training import TrainConfig, bptt_gradient, window_loss, train
