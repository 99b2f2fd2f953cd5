"""Time-lag fuel moisture model."""
from model.moisture import (
    AtmosphericSample,
    EquilibriumPair,
    EquilibriumCoefficients,
    ModelConfig,
    Regime,
    VAN_WAGNER,
    equilibria,
    equilibria_array,
    select_regime,
    step,
    simulate,
)
