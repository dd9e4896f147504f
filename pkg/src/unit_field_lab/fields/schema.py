"""Shared record for unit vector fields on S^{2k+1}."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from unit_field_lab.geometry import SphereDim, SpherePoint, TangentVector

AmbientMap = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FieldDefinition:
    """A unit tangent field given by an ambient closed-form formula."""

    # Sphere the field lives on
    dim: SphereDim
    # Ambient formula x -> v(x), batched over leading axes, shape (..., 2k+2)
    formula: AmbientMap
    # Partial derivatives of the ambient formula, shape (..., 2k+2, 2k+2), J[i, j] = ∂v_i/∂x_j.
    # None selects the finite-difference covariant derivative.
    exact_jacobian: Optional[AmbientMap] = None
    label: str = "field"

    def evaluate(self, p: SpherePoint) -> TangentVector:
        return TangentVector(p, self.formula(p.coords))

    def jacobian(self, p: SpherePoint) -> np.ndarray:
        if self.exact_jacobian is None:
            raise ValueError(f"Field '{self.label}' has no exact Jacobian")
        return self.exact_jacobian(p.coords)

    @property
    def has_exact_jacobian(self) -> bool:
        return self.exact_jacobian is not None
