#!/usr/bin/env python3
"""
Hansbo Kernels - Cut elements with doubled degrees of freedom, and tip elements

A cut element is split into P- and P+. Each virtual basis function is the
sum of two one-sided functions, so the element carries two copies of its
DOFs and its stiffness is block diagonal: the element recipe is run on each
sub-polygon with its own projector and stabilization scaling.

The tip element is not split; its boundary also includes both crack faces,
along which the hat traces come from the same spline trace model.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag, eigvalsh

from ..core.constants import Tolerances
from ..core.crack import Crack, SplitElement, crack_intervals_in_polygon, split_polygon, tip_element_faces
from ..physics.material import Material
from ..utils.errors import InvalidArgumentError
from ..utils.logging import get_logger
from .cells import build_sub_cells, build_tip_cell
from .element_kernel import ElementDofLayout, ElementKernelResult, KernelSettings, compute_cell_kernel
from .trace_model import CrackTraceModel, boundary_hat_values, build_trace_model

logger = get_logger(__name__)


@dataclass
class CutElementKernel:
    """
    Kernels of the two sides of a cut element.

    Local DOFs are the parent layout for P- followed by the parent layout
    for P+.
    """

    element: int
    split: SplitElement
    trace: CrackTraceModel
    minus: ElementKernelResult
    plus: ElementKernelResult

    @property
    def parts(self) -> Tuple[ElementKernelResult, ElementKernelResult]:
        return self.minus, self.plus

    @property
    def layout(self) -> ElementDofLayout:
        return self.minus.layout

    @property
    def n_dof(self) -> int:
        return 2 * self.layout.n_dof

    @property
    def K_c(self) -> np.ndarray:
        return block_diag(self.minus.K_c, self.plus.K_c)

    @property
    def K_s(self) -> np.ndarray:
        return block_diag(self.minus.K_s, self.plus.K_s)

    @property
    def stiffness(self) -> np.ndarray:
        return block_diag(self.minus.stiffness, self.plus.stiffness)


def build_cut_kernel(
    element: int,
    parent_coords: np.ndarray,
    crack: Crack,
    material: Material,
    h: float,
    enriched: Optional[Sequence[bool]] = None,
    settings: Optional[KernelSettings] = None,
) -> CutElementKernel:
    """
    Split a cut element and compute the kernel of each side.

    Raises:
        InvalidArgumentError: If the crack does not cross the element.
        NotSplittableError: If the element contains the tip.
    """
    parent_coords = np.asarray(parent_coords, dtype=float)
    tol = Tolerances.SNAP_RELATIVE * float(np.ptp(parent_coords, axis=0).max())
    if not crack_intervals_in_polygon(crack, parent_coords, tol):
        raise InvalidArgumentError(f"Element {element} is not cut by the crack; use the standard kernel")

    split = split_polygon(parent_coords, crack, parent=element)
    trace = build_trace_model(parent_coords, split.chord, boundary_hat_values(parent_coords, split.chord))
    minus_cell, plus_cell = build_sub_cells(element, parent_coords, split, trace)

    minus = compute_cell_kernel(minus_cell, material, crack, h, enriched, settings)
    plus = compute_cell_kernel(plus_cell, material, crack, h, enriched, settings)
    logger.debug(
        f"Cut element {element}: areas {split.minus.area:.3e} / {split.plus.area:.3e}, "
        f"tau {minus.tau:.3e} / {plus.tau:.3e}"
    )
    return CutElementKernel(element=element, split=split, trace=trace, minus=minus, plus=plus)


def build_tip_kernel(
    element: int,
    parent_coords: np.ndarray,
    crack: Crack,
    material: Material,
    h: float,
    enriched: Optional[Sequence[bool]] = None,
    settings: Optional[KernelSettings] = None,
) -> ElementKernelResult:
    """Kernel of the element containing the crack tip, crack faces included."""
    parent_coords = np.asarray(parent_coords, dtype=float)
    entry = tip_element_faces(parent_coords, crack)[:1]
    trace = build_trace_model(parent_coords, entry, boundary_hat_values(parent_coords, entry))
    cell = build_tip_cell(element, parent_coords, crack, trace)
    return compute_cell_kernel(cell, material, crack, h, enriched, settings)


def count_zero_modes(K: np.ndarray, relative: float = Tolerances.ZERO_MODE_RELATIVE) -> int:
    """Number of eigenvalues of a symmetric matrix below ``relative * ||K||``."""
    K = np.asarray(K, dtype=float)
    eigenvalues = eigvalsh(0.5 * (K + K.T))
    scale = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
    if scale == 0.0:
        return len(eigenvalues)
    return int(np.sum(np.abs(eigenvalues) < relative * scale))
