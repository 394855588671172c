"""Figure rendering for cfmimo result files."""

from .render import KINDS, PlotSpec, SchemaError, render

__version__ = "0.1.0"
