"""Exceptional Laguerre translation, maximum principles and Nikolskii constants."""

from .certificates import Certificate, GridSpec
from .exceptions import (
    DegenerateNormalization,
    GridTooShort,
    InvalidDomain,
    InvalidParams,
    NoConvergence,
    QuadratureDivergence,
    UnsupportedFamily,
    XlagError,
)
from .translation import SpanFunction, translate, translated
from .xlaguerre import Kind, XFamily, eigenfunction_u, evaluate_u, evaluate_z

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "DegenerateNormalization",
    "GridSpec",
    "GridTooShort",
    "InvalidDomain",
    "InvalidParams",
    "Kind",
    "NoConvergence",
    "QuadratureDivergence",
    "SpanFunction",
    "UnsupportedFamily",
    "XFamily",
    "XlagError",
    "eigenfunction_u",
    "evaluate_u",
    "evaluate_z",
    "translate",
    "translated",
]
