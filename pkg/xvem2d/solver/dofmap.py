#!/usr/bin/env python3
"""
DOF Map - Global numbering of standard, enriched and doubled unknowns

Global ids are laid out in four contiguous blocks:

1. standard x/y DOFs of every node;
2. mode-I/mode-II DOFs of every enriched node;
3. ghost x/y DOFs of every node that carries a second copy (nodes of cut
   elements);
4. ghost mode-I/mode-II DOFs of enriched ghost nodes.

The ghost copy of a node is the one seen from the side of the crack the
node does not lie on. Nodes of elements whose closure contains the tip get
no ghost copy (the crack opening closes at the tip element), unless the tip
lies on the domain boundary.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..core.crack import EnrichmentPlan
from ..core.mesh import PolygonalMesh
from ..utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class DofMap:
    """Global DOF ids; -1 marks a missing slot."""

    standard: np.ndarray
    enriched: np.ndarray
    ghost_standard: np.ndarray
    ghost_enriched: np.ndarray
    node_side: np.ndarray
    on_crack: np.ndarray
    n_dofs: int

    @property
    def n_nodes(self) -> int:
        return len(self.standard)

    @property
    def has_ghost(self) -> np.ndarray:
        return self.ghost_standard[:, 0] >= 0

    @property
    def is_enriched(self) -> np.ndarray:
        return self.enriched[:, 0] >= 0

    @property
    def n_ghost_nodes(self) -> int:
        return int(self.has_ghost.sum())

    def sub_cell_copies(self, loop: np.ndarray, side: int) -> np.ndarray:
        """Ghost flags for the vertices of a sub-cell on ``side`` of the crack."""
        loop = np.asarray(loop, dtype=int)
        return self.has_ghost[loop] & (self.node_side[loop] != side)

    def uncut_copies(self, loop: np.ndarray, cell_side: int) -> np.ndarray:
        """Ghost flags for an uncut cell: on-crack nodes seen from the negative side."""
        loop = np.asarray(loop, dtype=int)
        if cell_side >= 0:
            return np.zeros(len(loop), dtype=bool)
        return self.has_ghost[loop] & self.on_crack[loop]

    def cell_dofs(self, loop: np.ndarray, enriched_local: np.ndarray, ghost: np.ndarray) -> np.ndarray:
        """
        Global ids in the local kept-DOF order of an element layout.

        Args:
            loop: Global node ids of the parent element.
            enriched_local: Enrichment flag of each local vertex.
            ghost: Whether each local vertex uses its ghost copy.
        """
        loop = np.asarray(loop, dtype=int)
        ghost = np.asarray(ghost, dtype=bool)
        std = np.where(ghost[:, None], self.ghost_standard[loop], self.standard[loop])
        enr = np.where(ghost[:, None], self.ghost_enriched[loop], self.enriched[loop])
        mask = np.asarray(enriched_local, dtype=bool)
        ids = np.concatenate([std.ravel(), enr[mask, 0], enr[mask, 1]])
        if np.any(ids < 0):
            raise ValueError(f"Missing DOF ids for element nodes {loop.tolist()}")
        return ids

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_dofs": self.n_dofs,
            "n_nodes": self.n_nodes,
            "n_enriched_nodes": int(self.is_enriched.sum()),
            "n_ghost_nodes": self.n_ghost_nodes,
        }


def build_dof_map(mesh: PolygonalMesh, plan: Optional[EnrichmentPlan] = None) -> DofMap:
    """
    Number the unknowns of a mesh.

    Args:
        mesh: Mesh.
        plan: Enrichment plan (None for an uncracked problem).

    Returns:
        DofMap with contiguous ids.
    """
    n = mesh.n_nodes
    standard = np.arange(2 * n).reshape(n, 2)
    enriched = -np.ones((n, 2), dtype=int)
    ghost_standard = -np.ones((n, 2), dtype=int)
    ghost_enriched = -np.ones((n, 2), dtype=int)
    next_id = 2 * n

    if plan is None:
        return DofMap(
            standard=standard,
            enriched=enriched,
            ghost_standard=ghost_standard,
            ghost_enriched=ghost_enriched,
            node_side=np.ones(n, dtype=int),
            on_crack=np.zeros(n, dtype=bool),
            n_dofs=next_id,
        )

    for node in plan.enriched_nodes:
        enriched[node] = [next_id, next_id + 1]
        next_id += 2

    ghost_nodes = set()
    for e in plan.cut_elements:
        ghost_nodes.update(int(v) for v in mesh.elements[e])
    if not plan.tip_on_boundary:
        for e in plan.tip_closure_elements:
            ghost_nodes.difference_update(int(v) for v in mesh.elements[e])
    ghost_nodes = sorted(ghost_nodes)

    for node in ghost_nodes:
        ghost_standard[node] = [next_id, next_id + 1]
        next_id += 2
    for node in ghost_nodes:
        if plan.enriched[node]:
            ghost_enriched[node] = [next_id, next_id + 1]
            next_id += 2

    dofmap = DofMap(
        standard=standard,
        enriched=enriched,
        ghost_standard=ghost_standard,
        ghost_enriched=ghost_enriched,
        node_side=plan.node_side,
        on_crack=plan.on_crack,
        n_dofs=next_id,
    )
    logger.info(
        f"DOF map: {dofmap.n_dofs} unknowns ({plan.n_enriched} enriched nodes, {len(ghost_nodes)} doubled nodes)"
    )
    return dofmap
