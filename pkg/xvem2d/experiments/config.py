#!/usr/bin/env python3
"""
Run Configuration - Sectioned YAML settings validated with pydantic

Defaults live in ``xvem2d/config/default.yaml``. A user file is deep-merged
over them, ``XVEM2D_*`` environment variables (optionally from a ``.env``
file) override the ``general`` section, and the result is validated.
"""

import copy
import hashlib
import json
import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .. import CONFIG_DIR
from ..core.crack import EnrichmentMode
from ..core.quadrature import GradingOptions
from ..physics.material import Material, PlaneAssumption
from ..solver.problem import DiscretizationSettings
from ..utils.errors import ConfigurationError
from ..utils.logging import get_logger
from ..vem.element_kernel import KernelSettings, StabilizationScheme

logger = get_logger(__name__)

DEFAULT_CONFIG_PATH = CONFIG_DIR / "default.yaml"
ENV_PREFIX = "XVEM2D_"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", use_enum_values=False)


class GeneralConfig(_Section):
    log_level: str = "INFO"
    workers: int = Field(1, ge=1)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value}")
        return value


class MaterialConfig(_Section):
    young_modulus: float = Field(1.0e5, gt=0.0)
    poisson_ratio: float = Field(0.3, ge=0.0, lt=0.5)
    plane: PlaneAssumption = PlaneAssumption.STRAIN


class MeshKind(str, Enum):
    QUAD = "quad"
    VORONOI = "voronoi"


class MeshConfig(_Section):
    kind: MeshKind = MeshKind.QUAD
    n: int = Field(10, ge=1, description="Elements per side for quad meshes")
    n_seeds: int = Field(64, ge=3)
    lloyd_iterations: int = Field(50, ge=0)
    rng_seed: int = 2019
    collapse_ratio: float = Field(0.1, ge=0.0, lt=0.5)


class CrackConfig(_Section):
    points: Optional[List[List[float]]] = None
    tip: Literal["last", "first"] = "last"

    @field_validator("points")
    @classmethod
    def _polyline(cls, value):
        if value is not None and (len(value) < 2 or any(len(p) != 2 for p in value)):
            raise ValueError("crack needs at least two 2D points")
        return value


class EnrichmentConfig(_Section):
    mode: EnrichmentMode = EnrichmentMode.GEOMETRIC
    radius: float = Field(0.5, gt=0.0)


class StabilizationConfig(_Section):
    scheme: StabilizationScheme = StabilizationScheme.DOFI
    alpha: float = Field(1.0, gt=0.0)


class QuadratureConfig(_Section):
    edge_order: int = Field(16, ge=1)
    graded: bool = True
    graded_ratio: float = Field(0.15, gt=0.0, lt=1.0)
    graded_levels: int = Field(24, ge=1)
    trigger: float = Field(0.05, gt=0.0)


class SIFConfig(_Section):
    radius: float = Field(0.4, gt=0.0)
    sweep_radii: List[float] = Field(default_factory=lambda: [0.3, 0.4, 0.5])


class OutputConfig(_Section):
    directory: str = "results"
    vtk: bool = False
    json_indent: int = Field(2, ge=0)


class RunConfig(_Section):
    """Complete run configuration."""

    general: GeneralConfig = Field(default_factory=GeneralConfig)
    material: MaterialConfig = Field(default_factory=MaterialConfig)
    mesh: MeshConfig = Field(default_factory=MeshConfig)
    crack: CrackConfig = Field(default_factory=CrackConfig)
    enrichment: EnrichmentConfig = Field(default_factory=EnrichmentConfig)
    stabilization: StabilizationConfig = Field(default_factory=StabilizationConfig)
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    sif: SIFConfig = Field(default_factory=SIFConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    def build_material(self) -> Material:
        return Material(
            young_modulus=self.material.young_modulus,
            poisson_ratio=self.material.poisson_ratio,
            plane=self.material.plane,
        )

    def kernel_settings(self) -> KernelSettings:
        q = self.quadrature
        return KernelSettings(
            edge_order=q.edge_order,
            grading=GradingOptions(enabled=q.graded, ratio=q.graded_ratio, levels=q.graded_levels, trigger=q.trigger),
            stabilization=self.stabilization.scheme,
            alpha=self.stabilization.alpha,
        )

    def discretization_settings(self) -> DiscretizationSettings:
        return DiscretizationSettings(
            enrichment=self.enrichment.mode,
            enrichment_radius=self.enrichment.radius,
            kernel=self.kernel_settings(),
            workers=self.general.workers,
        )

    def with_updates(self, updates: Dict[str, Any]) -> "RunConfig":
        """New validated config with nested ``updates`` merged in."""
        return _validate(deep_merge(self.model_dump(), updates))

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``."""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _read_yaml(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Configuration file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Invalid YAML in {path}: {e}")
    if not isinstance(data, dict):
        raise ConfigurationError(f"Configuration file {path} must contain a mapping")
    return data


def _environment_overrides() -> Dict[str, Any]:
    load_dotenv(override=False)
    general: Dict[str, Any] = {}
    if os.getenv(f"{ENV_PREFIX}LOG_LEVEL"):
        general["log_level"] = os.environ[f"{ENV_PREFIX}LOG_LEVEL"]
    if os.getenv(f"{ENV_PREFIX}WORKERS"):
        general["workers"] = os.environ[f"{ENV_PREFIX}WORKERS"]
    return {"general": general} if general else {}


def _validate(data: Dict[str, Any]) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ConfigurationError(f"Invalid configuration value at '{location}': {first['msg']}")


def load_run_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
    use_environment: bool = True,
) -> RunConfig:
    """
    Load the default configuration, merge a user file and overrides, and validate.

    Args:
        path: Optional user YAML file.
        overrides: Nested mapping applied last (command-line options).
        use_environment: Apply ``XVEM2D_*`` environment overrides.

    Returns:
        Validated RunConfig.

    Raises:
        ConfigurationError: If a file is missing or unreadable, or a value is invalid.
    """
    data = _read_yaml(DEFAULT_CONFIG_PATH) if DEFAULT_CONFIG_PATH.exists() else {}
    if path is not None:
        data = deep_merge(data, _read_yaml(path))
        logger.debug(f"Merged configuration file {path}")
    if use_environment:
        data = deep_merge(data, _environment_overrides())
    if overrides:
        data = deep_merge(data, overrides)
    return _validate(data)


def config_hash(config: RunConfig) -> str:
    """SHA-256 of the canonical JSON form of a configuration."""
    canonical = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
