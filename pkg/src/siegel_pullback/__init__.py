"""Exact and numeric tools for pullbacks of Siegel Eisenstein series under differential operators."""

__version__ = "0.1.0"
