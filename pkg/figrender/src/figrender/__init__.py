"""Figure rendering from experiment CSV logs."""
from .render import FIGURE_SCHEMAS, SchemaError, load_csv, render

__all__ = ["FIGURE_SCHEMAS", "SchemaError", "load_csv", "render"]
