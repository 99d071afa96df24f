"""Material law, near-tip fields and the extended basis."""

from .basis import BasisValues, ExtendedBasis, eval_extended_basis
from .material import (
    CrackMode,
    Material,
    PlaneAssumption,
    TipFieldValue,
    effective_modulus,
    elasticity_tensor,
    kolosov,
    scaled_tip_fields,
    shear_modulus,
    stress_from_gradient,
    tip_displacement,
    tip_fields,
    tip_gradient,
    tip_stress,
    williams_displacement,
    williams_fields,
    williams_scale,
)

__all__ = [
    "BasisValues",
    "ExtendedBasis",
    "eval_extended_basis",
    "CrackMode",
    "Material",
    "PlaneAssumption",
    "TipFieldValue",
    "effective_modulus",
    "elasticity_tensor",
    "kolosov",
    "scaled_tip_fields",
    "shear_modulus",
    "stress_from_gradient",
    "tip_displacement",
    "tip_fields",
    "tip_gradient",
    "tip_stress",
    "williams_displacement",
    "williams_fields",
    "williams_scale",
]
