"""Exact commutative algebra over Q: Groebner bases, presented rings and modules."""

from .groebner import QQ, TermOrder, groebner, is_groebner, normal_form
from .modules import ModuleMap, ModulePresentation, entries, intersect, vector
from .rings import Poly, PolyRing, PresentedRing, RingMap

__all__ = [
    "QQ", "TermOrder", "groebner", "is_groebner", "normal_form",
    "Poly", "PolyRing", "PresentedRing", "RingMap",
    "ModulePresentation", "ModuleMap", "vector", "entries", "intersect",
]
