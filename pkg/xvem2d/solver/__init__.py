"""Global DOF numbering, discretization, assembly, boundary conditions and solve."""

from .dofmap import DofMap, build_dof_map
from .problem import Discretization, DiscretizationSettings, ElementEntry, discretize
from .system import (
    BoundaryConditions,
    ConstrainedSystem,
    EssentialBC,
    NaturalBC,
    PointConstraint,
    SolutionField,
    apply_bcs,
    assemble,
    essential_constraints,
    interpolate,
    load_vector,
    reaction_resultant,
    solve,
    solve_problem,
    strain_energy,
)

__all__ = [
    "DofMap",
    "build_dof_map",
    "Discretization",
    "DiscretizationSettings",
    "ElementEntry",
    "discretize",
    "BoundaryConditions",
    "ConstrainedSystem",
    "EssentialBC",
    "NaturalBC",
    "PointConstraint",
    "SolutionField",
    "apply_bcs",
    "assemble",
    "essential_constraints",
    "interpolate",
    "load_vector",
    "reaction_resultant",
    "solve",
    "solve_problem",
    "strain_energy",
]
