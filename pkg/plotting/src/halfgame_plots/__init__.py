"""Charts for halfgame bias-sweep output files."""

from .plots import ASYMPTOTIC_FRACTION, CurveData, PlotSpec, plot_rounds, plot_sweep
from .reader import EXPECTED_HEADER, SWEEP_SCHEMA, SchemaError, SweepFile, read_sweep

__version__ = "0.1.0"
