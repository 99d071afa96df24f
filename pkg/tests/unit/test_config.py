#!/usr/bin/env python3
"""
Unit tests for run configuration loading and validation.
"""

import pytest
import yaml

from xvem2d.core.crack import EnrichmentMode
from xvem2d.experiments.config import MeshKind, config_hash, deep_merge, load_run_config
from xvem2d.physics.material import PlaneAssumption
from xvem2d.utils.errors import ConfigurationError
from xvem2d.vem.element_kernel import StabilizationScheme


def write_yaml(path, data):
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(data, f)
    return path


class TestDefaults:
    """Test cases for the packaged defaults."""

    def test_values(self, default_config):
        assert default_config.material.young_modulus == 1.0e5
        assert default_config.material.plane is PlaneAssumption.STRAIN
        assert default_config.enrichment.mode is EnrichmentMode.GEOMETRIC
        assert default_config.stabilization.scheme is StabilizationScheme.DOFI
        assert default_config.quadrature.graded
        assert default_config.sif.radius == 0.4
        assert default_config.crack.points is None

    def test_derived_settings(self, default_config):
        settings = default_config.discretization_settings()
        assert settings.enrichment_radius == 0.5
        assert settings.kernel.edge_order == 16
        assert settings.kernel.grading.enabled
        assert default_config.build_material().poisson_ratio == 0.3


class TestLoading:
    """Test cases for file merging, overrides and environment."""

    def test_user_file_merged(self, temp_dir):
        path = write_yaml(temp_dir / "run.yaml", {"mesh": {"kind": "voronoi", "n_seeds": 200}})
        config = load_run_config(path, use_environment=False)
        assert config.mesh.kind is MeshKind.VORONOI
        assert config.mesh.n_seeds == 200
        assert config.mesh.lloyd_iterations == 50

    def test_overrides_win(self, temp_dir):
        path = write_yaml(temp_dir / "run.yaml", {"stabilization": {"alpha": 0.1}})
        config = load_run_config(path, overrides={"stabilization": {"alpha": 0.05}}, use_environment=False)
        assert config.stabilization.alpha == 0.05

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("XVEM2D_LOG_LEVEL", "debug")
        monkeypatch.setenv("XVEM2D_WORKERS", "3")
        config = load_run_config()
        assert config.general.log_level == "DEBUG"
        assert config.general.workers == 3

    def test_missing_file(self, temp_dir):
        with pytest.raises(ConfigurationError):
            load_run_config(temp_dir / "absent.yaml")

    def test_not_a_mapping(self, temp_dir):
        path = temp_dir / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigurationError):
            load_run_config(path, use_environment=False)

    @pytest.mark.parametrize(
        "update",
        [
            {"material": {"poisson_ratio": 0.5}},
            {"stabilization": {"alpha": 0.0}},
            {"enrichment": {"mode": "everything"}},
            {"crack": {"points": [[0.0, 0.0]]}},
            {"general": {"log_level": "LOUD"}},
            {"mesh": {"unknown_key": 1}},
        ],
    )
    def test_invalid_values(self, update):
        with pytest.raises(ConfigurationError):
            load_run_config(overrides=update, use_environment=False)


class TestHashing:
    """Test cases for the canonical configuration hash."""

    def test_stable(self, default_config):
        assert config_hash(default_config) == config_hash(load_run_config(use_environment=False))
        assert len(config_hash(default_config)) == 64

    def test_yaml_round_trip(self, default_config, temp_dir):
        changed = default_config.with_updates({"mesh": {"kind": "voronoi"}, "crack": {"points": [[0, 0], [1, 1]]}})
        path = temp_dir / "dump.yaml"
        path.write_text(changed.to_yaml())
        assert config_hash(load_run_config(path, use_environment=False)) == config_hash(changed)

    def test_changes_with_values(self, default_config):
        changed = default_config.with_updates({"sif": {"radius": 0.3}})
        assert changed.sif.radius == 0.3
        assert config_hash(changed) != config_hash(default_config)

    def test_deep_merge_copies(self):
        base = {"a": {"b": 1, "c": [1]}}
        merged = deep_merge(base, {"a": {"b": 2}})
        assert merged == {"a": {"b": 2, "c": [1]}}
        assert base["a"]["b"] == 1
