"""Symbolic codings of interval exchange transformations.

Exact generation of coding words, Rauzy-graph admissibility analysis,
induced-order checks, and reconstruction of an exchange from its word.
"""
from .exact import ExactScalar, Interval, parse_scalar, format_scalar

__version__ = "0.1.0"

__all__ = ["ExactScalar", "Interval", "parse_scalar", "format_scalar", "__version__"]
