"""Offline figure rendering for simulation harness CSV logs."""

from .figures import build_figure, render
from .schema import COLUMNS, KINDS, PlotSpec, Run, SchemaError, load_run

__all__ = [
    "COLUMNS",
    "KINDS",
    "PlotSpec",
    "Run",
    "SchemaError",
    "build_figure",
    "load_run",
    "render",
]
