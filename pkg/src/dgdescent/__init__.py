"""Derived affine geometry over Q: resolving DG algebras, their cohomology,
homotopies of morphisms and descent along localization covers."""

from .algebra import (AlgebraError, DgMorphism, FreeGradedAlgebra, identity, inclusion, koszul,
                      localize, tensor_product)
from .cohomology import (amplitude, cotangent_bar, h0_ring, h_theta, hn_map, hn_module, is_etale,
                         is_etale_map, is_open_immersion, les_theta, obstruction_data,
                         relative_dimension)
from .descent import Cover, GluingData, cech, glue_algebras, glue_modules
from .homotopy import pi_module
from .report import Report

__version__ = "0.1.0"

__all__ = [
    "AlgebraError", "DgMorphism", "FreeGradedAlgebra", "identity", "inclusion", "koszul", "localize",
    "tensor_product", "amplitude", "cotangent_bar", "h0_ring", "h_theta", "hn_map", "hn_module",
    "is_etale", "is_etale_map", "is_open_immersion", "les_theta", "obstruction_data",
    "relative_dimension", "Cover", "GluingData", "cech", "glue_algebras", "glue_modules", "pi_module",
    "Report",
]
