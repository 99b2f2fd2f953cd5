"""
Plotting Utilities
==================
Publication-style matplotlib defaults and the trajectory plot used by the
plot scripts that fmda writes next to its CSV outputs.

Uses the object-oriented Figure API only, so no GUI backend is required.
"""
import logging
from pathlib import Path
from typing import Dict, Optional

import matplotlib
import numpy as np
import pandas as pd
from matplotlib.figure import Figure

logger = logging.getLogger(__name__)

# =============================================================================
# PUBLICATION-QUALITY DEFAULTS
# =============================================================================

PUBLICATION_PARAMS = {
    # Figure settings
    'figure.figsize': (12, 5),
    'figure.dpi': 150,
    'figure.facecolor': 'white',

    # Font settings
    'font.family': 'sans-serif',
    'font.sans-serif': ['DejaVu Sans', 'Arial', 'Helvetica', 'Liberation Sans'],
    'font.size': 11,

    # Axes settings
    'axes.titlesize': 13,
    'axes.titleweight': 'bold',
    'axes.labelsize': 11,
    'axes.grid': True,
    'axes.spines.top': False,
    'axes.spines.right': False,

    # Grid settings
    'grid.alpha': 0.3,
    'grid.linestyle': '--',

    # Lines and legend
    'lines.linewidth': 1.5,
    'legend.fontsize': 10,
    'legend.framealpha': 0.9,

    # Save settings
    'savefig.dpi': 150,
    'savefig.bbox': 'tight',
    'savefig.facecolor': 'white',
}

# Column name -> (label, plot keyword arguments); unknown columns are skipped
SERIES_STYLES: Dict[str, tuple] = {
    'truth': ('Truth', {'color': 'black', 'linewidth': 1.0}),
    'obs': ('Observations', {'color': '#7f7f7f', 'marker': '.', 'linestyle': 'none', 'markersize': 3}),
    'm_model': ('Kalman filter / model', {'color': '#1f77b4'}),
    'kf_pred': ('Kalman filter / model', {'color': '#1f77b4'}),
    'm_rnn': ('Recurrent network', {'color': '#d62728'}),
    'rnn_pred': ('Recurrent network', {'color': '#d62728'}),
}


def plot_trajectory_csv(csv_path, out_png, split_time: Optional[float] = None,
                        title: str = '') -> Path:
    """
    Plot the moisture columns of a trajectory CSV and save a PNG.

    Args:
        csv_path: Trajectory CSV with a 'time' column
        out_png: Output image path
        split_time: Learning/forecast boundary, drawn as a vertical line
        title: Figure title

    Returns:
        Path of the saved image
    """
    df = pd.read_csv(csv_path)
    if 'time' not in df.columns:
        raise ValueError(f"{csv_path}: no 'time' column")

    with matplotlib.rc_context(PUBLICATION_PARAMS):
        fig = Figure()
        ax = fig.add_subplot(1, 1, 1)
        for column, (label, style) in SERIES_STYLES.items():
            if column in df.columns and df[column].notna().any():
                ax.plot(df['time'], df[column], label=label, **style)
        if split_time is not None and np.isfinite(split_time):
            ax.axvline(split_time, color='green', linestyle=':', linewidth=1.5, label='Forecast start')
        ax.set_xlabel('Time (hours)')
        ax.set_ylabel('Fuel moisture (%)')
        if title:
            ax.set_title(title)
        ax.legend(loc='best')

        out_png = Path(out_png)
        out_png.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out_png)

    logger.info(f"✓ Saved plot: {out_png}")
    return out_png
