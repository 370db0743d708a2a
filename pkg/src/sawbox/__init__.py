"""Self-avoiding walks confined to a square: exact enumeration and series analysis."""

from .lattice import Box, Point, Polygon, SpanVariant, Walk, WalkClass
from .series import Provenance, Series, Term

__version__ = "0.1.0"

__all__ = ["Box", "Point", "Polygon", "SpanVariant", "Walk", "WalkClass", "Provenance", "Series", "Term"]
