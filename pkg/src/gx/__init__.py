"""Exact cochain computations of the Pontrjagin dual of 3-dimensional Spin bordism."""

from importlib.metadata import version as _v

try:
    __version__ = _v("gx")
except Exception:
    __version__ = "0.0.0"
