"""Post-hoc plotting of fmda trajectory files."""
