"""Readers for series CSV, truth CSV, scenario JSON and weights JSON files."""
from parser.csv_parser import load_csv, load_truth_csv, default_split, SERIES_COLUMNS, TRUTH_COLUMNS
from parser.config_parser import load_synth_config, synth_config_from_dict
from parser.weights_parser import load_weights
