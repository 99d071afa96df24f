#!/usr/bin/env python3
"""
Discretization - Element kernels and their global DOF maps

Turns a mesh, a material and an optional crack into the list of element
kernels the global system is assembled from. Each element is classified
(uncut, cut, tip), its kernel is computed with the matching recipe and its
local DOFs are mapped to global ids, including the choice between the
primary and the ghost copy of every node.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from ..core.constants import Defaults
from ..core.crack import Crack, ElementKind, EnrichmentMode, EnrichmentPlan, classify_elements, signed_distance
from ..core.mesh import PolygonalMesh
from ..physics.material import Material
from ..utils.errors import InvalidArgumentError
from ..utils.logging import get_logger
from ..vem.cells import build_element_cell
from ..vem.element_kernel import ElementKernelResult, KernelSettings, compute_cell_kernel
from ..vem.hansbo import CutElementKernel, build_cut_kernel, build_tip_kernel
from .dofmap import DofMap, build_dof_map

logger = get_logger(__name__)


@dataclass(frozen=True)
class DiscretizationSettings:
    """Enrichment rule, kernel settings and worker count."""

    enrichment: EnrichmentMode = EnrichmentMode.GEOMETRIC
    enrichment_radius: Optional[float] = Defaults.ENRICHMENT_RADIUS
    kernel: KernelSettings = dataclass_field(default_factory=KernelSettings)
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "enrichment", EnrichmentMode(self.enrichment))
        if self.workers < 1:
            raise InvalidArgumentError(f"workers must be at least 1, got {self.workers}")
        if self.enrichment is EnrichmentMode.GEOMETRIC and (
            self.enrichment_radius is None or self.enrichment_radius <= 0.0
        ):
            raise InvalidArgumentError(f"Geometric enrichment requires a positive radius, got {self.enrichment_radius}")


@dataclass
class ElementEntry:
    """Kernel of one mesh element and the global ids of its local DOFs."""

    element: int
    kind: ElementKind
    kernel: Union[ElementKernelResult, CutElementKernel]
    dofs: np.ndarray

    def cells(self) -> Iterator[Tuple[ElementKernelResult, np.ndarray]]:
        """(cell kernel, global ids) pairs; two for a cut element, one otherwise."""
        if isinstance(self.kernel, CutElementKernel):
            n = self.kernel.layout.n_dof
            yield self.kernel.minus, self.dofs[:n]
            yield self.kernel.plus, self.dofs[n:]
        else:
            yield self.kernel, self.dofs

    @property
    def stiffness(self) -> np.ndarray:
        return self.kernel.stiffness


@dataclass
class Discretization:
    """Everything the global system needs, in element order."""

    mesh: PolygonalMesh
    material: Material
    crack: Optional[Crack]
    plan: Optional[EnrichmentPlan]
    dofmap: DofMap
    h: float
    settings: DiscretizationSettings
    entries: List[ElementEntry]

    @property
    def n_dofs(self) -> int:
        return self.dofmap.n_dofs

    def cells(self) -> Iterator[Tuple[ElementKernelResult, np.ndarray]]:
        for entry in self.entries:
            yield from entry.cells()

    def max_condition(self) -> float:
        return max((kernel.condition for kernel, _ in self.cells()), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_elements": self.mesh.n_elements,
            "n_nodes": self.mesh.n_nodes,
            "h": self.h,
            "dofs": self.dofmap.to_dict(),
            "enrichment": self.plan.to_dict() if self.plan is not None else None,
            "stabilization": self.settings.kernel.stabilization.value,
            "alpha": self.settings.kernel.alpha,
            "max_projector_condition": self.max_condition(),
        }


def _uncut_side(crack: Optional[Crack], centroid: np.ndarray) -> int:
    if crack is None:
        return 1
    return -1 if float(signed_distance(crack, centroid)) < 0.0 else 1


def discretize(
    mesh: PolygonalMesh,
    material: Material,
    crack: Optional[Crack] = None,
    settings: Optional[DiscretizationSettings] = None,
) -> Discretization:
    """
    Compute every element kernel of a (possibly cracked) mesh.

    Args:
        mesh: Polygonal mesh.
        material: Material law.
        crack: Crack, or None for an uncracked body.
        settings: Enrichment, kernel and threading options.

    Returns:
        Discretization with one entry per element, in element order.
    """
    settings = settings or DiscretizationSettings()
    h = mesh.max_diameter

    plan: Optional[EnrichmentPlan] = None
    if crack is not None:
        radius = settings.enrichment_radius if settings.enrichment is EnrichmentMode.GEOMETRIC else None
        plan = classify_elements(mesh, crack, settings.enrichment, radius)
    dofmap = build_dof_map(mesh, plan)

    def element_entry(e: int) -> ElementEntry:
        loop = mesh.elements[e]
        coords = mesh.element_coords(e)
        enriched = plan.enriched[loop] if plan is not None else np.zeros(len(loop), dtype=bool)
        kind = plan.kinds[e] if plan is not None else ElementKind.UNCUT

        if kind is ElementKind.CUT:
            kernel = build_cut_kernel(e, coords, crack, material, h, enriched, settings.kernel)
            dofs = np.concatenate(
                [
                    dofmap.cell_dofs(loop, enriched, dofmap.sub_cell_copies(loop, -1)),
                    dofmap.cell_dofs(loop, enriched, dofmap.sub_cell_copies(loop, +1)),
                ]
            )
        elif kind is ElementKind.TIP:
            kernel = build_tip_kernel(e, coords, crack, material, h, enriched, settings.kernel)
            dofs = dofmap.cell_dofs(loop, enriched, np.zeros(len(loop), dtype=bool))
        else:
            cell = build_element_cell(e, coords, crack)
            kernel = compute_cell_kernel(cell, material, crack, h, enriched, settings.kernel)
            side = _uncut_side(crack, cell.geometry.centroid)
            dofs = dofmap.cell_dofs(loop, enriched, dofmap.uncut_copies(loop, side))
        return ElementEntry(element=e, kind=kind, kernel=kernel, dofs=dofs)

    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            entries = list(pool.map(element_entry, range(mesh.n_elements)))
    else:
        entries = [element_entry(e) for e in range(mesh.n_elements)]

    disc = Discretization(
        mesh=mesh,
        material=material,
        crack=crack,
        plan=plan,
        dofmap=dofmap,
        h=h,
        settings=settings,
        entries=entries,
    )
    logger.info(
        f"Discretized {mesh.n_elements} elements into {disc.n_dofs} unknowns "
        f"(h = {h:.4g}, max projector condition {disc.max_condition():.2e})"
    )
    return disc
