"""Custom exceptions for the xvem2d solver."""

from typing import Optional


class XVEMError(Exception):
    """Base exception for numerical failures in the solver."""

    pass


class InvalidArgumentError(XVEMError, ValueError):
    """Raised when an operation receives arguments outside its domain."""

    pass


class MeshGenerationError(XVEMError):
    """Raised when a mesh cannot be generated or fails validation."""

    pass


class NotSplittableError(XVEMError):
    """Raised when an element cannot be split by the crack.

    The usual cause is a crack tip lying strictly inside the element; such
    elements are tip elements and are handled without splitting.
    """

    pass


class IntegrationError(XVEMError):
    """Raised when a quadrature encounters a non-finite integrand value."""

    pass


class KernelError(XVEMError):
    """Raised when an element kernel cannot be computed."""

    def __init__(self, message: str, element: Optional[int] = None, part: Optional[str] = None):
        self.element = element
        self.part = part
        where = ""
        if element is not None:
            where = f"element {element}"
            if part:
                where += f" ({part})"
            where += ": "
        super().__init__(f"{where}{message}")


class TraceModelError(XVEMError):
    """Raised when the crack trace interpolation system is singular."""

    pass


class SingularPointError(XVEMError):
    """Raised when a stress is requested exactly at the crack tip."""

    pass


class SolverError(XVEMError):
    """Raised when the global linear system cannot be solved."""

    def __init__(self, message: str, hint: Optional[str] = None):
        self.hint = hint
        super().__init__(f"{message} (hint: {hint})" if hint else message)


class ConfigurationError(Exception):
    """Raised when configuration is invalid."""

    pass
