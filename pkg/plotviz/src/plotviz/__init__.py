"""Batch renderer for BER/PEP sweep CSVs."""

from .core import (EmptySeriesError, MissingColumnError, PlotSpec, Series,
                   load_series, render)

__all__ = ["EmptySeriesError", "MissingColumnError", "PlotSpec", "Series",
           "load_series", "render"]

__version__ = "0.1.0"
