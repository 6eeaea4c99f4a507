"""Descent along localization covers."""

from .cech import (CechComplex, Cover, CoverError, GluedModule, ModuleAssignment, TrivializationError,
                   coboundary, glue_from_transitions, glue_modules, trivialize)

__all__ = ["Cover", "CoverError", "ModuleAssignment", "CechComplex", "coboundary", "trivialize",
           "TrivializationError", "GluedModule", "glue_modules", "glue_from_transitions"]

from .gluing import (GluedAlgebra, GluingData, GluingError, HomotopySquare, glue_algebras,
                     repair_augmentation, validate_gluing, verify_augmentation, verify_homotopy_square)
from .examples import (elliptic, module_as_ideal, obstructed_square, twisted_datum,
                       weight_gap_certificate)

__all__ += ["GluingData", "GluingError", "HomotopySquare", "GluedAlgebra", "glue_algebras",
            "validate_gluing", "verify_homotopy_square", "verify_augmentation", "repair_augmentation",
            "elliptic", "module_as_ideal", "twisted_datum", "obstructed_square", "weight_gap_certificate"]
from .morphisms import (cartesian_report, cech, check_assignment, der_assignment, descent_morphisms_check,
                        vanishing_report)

__all__ += ["cech", "check_assignment", "cartesian_report", "vanishing_report", "der_assignment",
            "descent_morphisms_check"]
