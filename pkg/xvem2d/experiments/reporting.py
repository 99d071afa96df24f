#!/usr/bin/env python3
"""
Report Writer - CSV tables and JSON reports of benchmark runs

Each command writes one CSV with a row per solve and one JSON document with
the resolved configuration, its hash, mesh statistics and the results.
"""

import csv
import json
import platform
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import numpy as np

from .. import __version__
from ..core.mesh import PolygonalMesh
from ..utils.logging import get_logger
from .config import RunConfig, config_hash

logger = get_logger(__name__)

CSV_COLUMNS = ["label", "h", "n_dofs", "energy", "rel_error", "K_I", "K_II", "wall_time"]


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def mesh_statistics(mesh: PolygonalMesh) -> Dict[str, Any]:
    """Element, node and size statistics of a mesh."""
    diameters = np.array([mesh.geometry(e).diameter for e in range(mesh.n_elements)])
    sizes = np.array([len(loop) for loop in mesh.elements])
    return {
        "n_elements": mesh.n_elements,
        "n_nodes": mesh.n_nodes,
        "h_max": float(diameters.max()),
        "h_min": float(diameters.min()),
        "vertices_per_element": {"min": int(sizes.min()), "max": int(sizes.max()), "mean": float(sizes.mean())},
        "area": mesh.total_area,
    }


class ReportWriter:
    """Writes the CSV and JSON outputs of one command."""

    def __init__(self, output_directory: Union[str, Path], config: RunConfig):
        self.output_dir = Path(output_directory)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.config = config
        logger.info(f"ReportWriter initialized with directory: {self.output_dir}")

    def write_csv(self, name: str, rows: Iterable[Dict[str, Any]]) -> Path:
        """Write result rows with the standard columns."""
        csv_path = self.output_dir / f"{name}.csv"
        with open(csv_path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, extrasaction="ignore")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in CSV_COLUMNS})
        logger.info(f"Results table written to: {csv_path}")
        return csv_path

    def write_json(
        self,
        name: str,
        command: str,
        results: Any,
        mesh: Optional[PolygonalMesh] = None,
        extra: Optional[Dict[str, Any]] = None,
    ) -> Path:
        """Write the JSON report of a command."""
        report = {
            "command": command,
            "generated_at": datetime.now().isoformat(),
            "version": __version__,
            "python": platform.python_version(),
            "config_hash": config_hash(self.config),
            "config": self.config.to_dict(),
            "mesh": mesh_statistics(mesh) if mesh is not None else None,
            "results": results,
        }
        if extra:
            report.update(extra)
        json_path = self.output_dir / f"{name}.json"
        with open(json_path, "w", encoding="utf-8") as f:
            json.dump(_plain(report), f, indent=self.config.output.json_indent)
        logger.info(f"Report written to: {json_path}")
        return json_path

    def write_report(
        self,
        name: str,
        command: str,
        rows: List[Dict[str, Any]],
        results: Any,
        mesh: Optional[PolygonalMesh] = None,
    ) -> Dict[str, Path]:
        return {
            "csv": self.write_csv(name, rows),
            "json": self.write_json(name, command, results, mesh),
        }
