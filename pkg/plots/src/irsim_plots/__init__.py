"""Static figure rendering for sweep result CSVs."""

from .render import FigureSpec, RenderResult, SchemaError, load_rows, render

__version__ = "0.1.0"
