"""Shared utilities: exceptions and logging."""

from .errors import (
    ConfigurationError,
    IntegrationError,
    InvalidArgumentError,
    KernelError,
    MeshGenerationError,
    NotSplittableError,
    SingularPointError,
    SolverError,
    TraceModelError,
    XVEMError,
)
from .logging import get_logger, setup_logging

__all__ = [
    "XVEMError",
    "InvalidArgumentError",
    "MeshGenerationError",
    "NotSplittableError",
    "IntegrationError",
    "KernelError",
    "TraceModelError",
    "SingularPointError",
    "SolverError",
    "ConfigurationError",
    "get_logger",
    "setup_logging",
]
