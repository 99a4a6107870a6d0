# this_file: src/fraccalc/__init__.py
"""Fractional calculus on an interval: Riemann-Liouville, Marchaud and Caputo operators on SBV functions."""

try:
    from fraccalc.__version__ import __version__
except ImportError:  # pragma: no cover - running from a source tree without a build
    __version__ = "0.0.0+unknown"

__all__ = ["__version__"]
