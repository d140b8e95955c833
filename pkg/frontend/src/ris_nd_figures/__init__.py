"""Figure rendering for ris-nd result CSVs."""

__version__ = "0.1.0"

from .render import FIGURE_IDS, SchemaError, build_figure, load_rows, render

__all__ = ["FIGURE_IDS", "SchemaError", "build_figure", "load_rows", "render"]
