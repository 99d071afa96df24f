"""Virtual element kernels: integration cells, projectors, stabilization, cut and tip elements."""

from .cells import CellEdge, EdgeKind, IntegrationCell, build_element_cell, build_sub_cells, build_tip_cell
from .element_kernel import (
    ElementDofLayout,
    ElementKernelResult,
    KernelSettings,
    StabilizationScheme,
    compute_cell_kernel,
    compute_D,
    compute_GB_boundary,
    compute_projector,
    consistency_stiffness,
    evaluation_matrix,
    repair_rank,
    restrict_partial,
    stabilization,
)
from .hansbo import CutElementKernel, build_cut_kernel, build_tip_kernel, count_zero_modes
from .trace_model import CrackTraceModel, boundary_hat_values, build_trace_model

__all__ = [
    "CellEdge",
    "EdgeKind",
    "IntegrationCell",
    "build_element_cell",
    "build_sub_cells",
    "build_tip_cell",
    "ElementDofLayout",
    "ElementKernelResult",
    "KernelSettings",
    "StabilizationScheme",
    "compute_cell_kernel",
    "compute_D",
    "compute_GB_boundary",
    "compute_projector",
    "consistency_stiffness",
    "evaluation_matrix",
    "repair_rank",
    "restrict_partial",
    "stabilization",
    "CutElementKernel",
    "build_cut_kernel",
    "build_tip_kernel",
    "count_zero_modes",
    "CrackTraceModel",
    "boundary_hat_values",
    "build_trace_model",
]
