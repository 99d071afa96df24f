"""Pytest configuration and shared fixtures."""

import tempfile
from pathlib import Path

import numpy as np
import pytest

from xvem2d.core.crack import Crack
from xvem2d.core.mesh import Rectangle, build_structured_quad_mesh
from xvem2d.experiments.config import load_run_config
from xvem2d.physics.material import Material, PlaneAssumption


@pytest.fixture
def temp_dir():
    """Create temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmp_dir:
        yield Path(tmp_dir)


@pytest.fixture
def unit_square():
    return Rectangle(0.0, 0.0, 1.0, 1.0)


@pytest.fixture
def square_domain():
    """The (-1, 1)^2 domain of the mixed-mode problem."""
    return Rectangle(-1.0, -1.0, 1.0, 1.0)


@pytest.fixture
def material():
    return Material(young_modulus=1.0e5, poisson_ratio=0.3, plane=PlaneAssumption.STRAIN)


@pytest.fixture
def unit_material():
    """E = 1, nu = 0."""
    return Material(young_modulus=1.0, poisson_ratio=0.0, plane=PlaneAssumption.STRAIN)


@pytest.fixture
def edge_crack():
    """Edge crack from (-1, 0) to the origin."""
    return Crack.from_points([(-1.0, 0.0), (0.0, 0.0)])


@pytest.fixture
def odd_quad_mesh(square_domain):
    """11 x 11 quads on (-1, 1)^2; y = 0 runs through element interiors."""
    return build_structured_quad_mesh(square_domain, 11, 11)


@pytest.fixture
def default_config():
    """Packaged defaults without environment overrides."""
    return load_run_config(use_environment=False)


@pytest.fixture
def rng():
    return np.random.default_rng(2019)
