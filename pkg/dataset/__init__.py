"""Time series construction: synthetic scenarios, features and splitting."""
from dataset.series import TimeSeries, SeriesRange, features, split, as_pairs
from dataset.synthetic import SynthConfig, synth, weather
