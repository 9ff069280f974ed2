"""
Polynomial map germs: exact representation, realification, arrangements and
the named catalog. `germ_catalog` is the shared catalog instance.
"""
from .arrangement import (
    arrangement_Q,
    braid_arrangement,
    coordinate_arrangement,
    generic_arrangement,
)
from .catalog import GermCatalog, builtin_germ, germ_catalog
from .models import Arrangement, GermDocument, GermKind, GermSpec
from .polymap import PolyMap, complex_eval, complex_symbols, real_symbols, realify, to_complex

__all__ = [
    "Arrangement",
    "GermCatalog",
    "GermDocument",
    "GermKind",
    "GermSpec",
    "PolyMap",
    "arrangement_Q",
    "braid_arrangement",
    "builtin_germ",
    "complex_eval",
    "complex_symbols",
    "coordinate_arrangement",
    "generic_arrangement",
    "germ_catalog",
    "real_symbols",
    "realify",
    "to_complex",
]
