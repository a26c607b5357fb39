"""Exact symbolic engine for formal group laws of Brown-Peterson and
Morava K-theories and for transferred Chern class coefficients."""

__version__ = "1.0.0"
