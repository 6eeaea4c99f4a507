"""Semi-free graded-commutative DG algebras over Q and their morphisms."""

from .constructions import is_free_extension, koszul, localize, new_generators, tensor_product
from .forms import simplex_forms, with_forms
from .graded import AlgebraError, Element, FreeGradedAlgebra, Generator
from .homotopies import Homotopy, Simplex2
from .morphisms import DgMorphism, check_morphism, identity, inclusion
from .strands import is_cocycle, solve_coboundary

__all__ = [
    "AlgebraError", "Element", "FreeGradedAlgebra", "Generator",
    "DgMorphism", "check_morphism", "identity", "inclusion",
    "koszul", "localize", "tensor_product", "is_free_extension", "new_generators",
    "with_forms", "simplex_forms", "Homotopy", "Simplex2", "is_cocycle", "solve_coboundary",
]
