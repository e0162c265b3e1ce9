"""Exact polynomial and truncated power-series arithmetic."""

from .gaussian import GaussianRational, gaussian
from .parse import ParseError, parse_polynomial
from .polynomial import Polynomial, PolyMap, determinant, jacobian, minors
from .series import DEFAULT_PRECISION, PrecisionError, TruncatedSeries, format_terms, substitute_arc

__all__ = [
    "DEFAULT_PRECISION",
    "GaussianRational",
    "ParseError",
    "PolyMap",
    "Polynomial",
    "PrecisionError",
    "TruncatedSeries",
    "determinant",
    "format_terms",
    "gaussian",
    "jacobian",
    "minors",
    "parse_polynomial",
    "substitute_arc",
]
