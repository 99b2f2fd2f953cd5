"""Writers for series, trajectories, weights, reports and plot scripts."""
from export.csv_exporter import save_csv, save_truth_csv, save_trajectory
from export.weights_exporter import save_weights, weights_to_dict
from export.report_exporter import save_report, write_plot_script
