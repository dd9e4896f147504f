"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations

from typing import Optional

import numpy as np


class UnitFieldLabError(Exception):
    """Base class for all errors raised by unit_field_lab."""


class ConfigurationError(UnitFieldLabError, ValueError):
    """Malformed run configuration, field or domain specification."""


class GeometryError(UnitFieldLabError, ValueError):
    """A geometric invariant (on-sphere, tangency, orthonormality) is violated."""


class NonSmoothFieldError(UnitFieldLabError):
    """Finite-difference estimates at h and h/2 disagree beyond tolerance."""

    def __init__(self, message: str, point: Optional[np.ndarray] = None, discrepancy: float = float("nan")):
        super().__init__(message)
        self.point = point
        self.discrepancy = discrepancy


class IntegrandError(UnitFieldLabError):
    """An integrand failed at a quadrature node."""

    def __init__(self, message: str, nodes: Optional[np.ndarray] = None):
        super().__init__(message)
        self.nodes = nodes
