"""Records describing integration domains on S^{2k+1}."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, FrozenSet, Optional, Tuple

import numpy as np

from unit_field_lab.geometry import SphereDim, SpherePoint, TangentVector

ParamMap = Callable[[np.ndarray], np.ndarray]
Box = Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class BoundaryPatch:
    """Parametrized boundary ∂K with its outward conormal."""

    # (..., 2k) parameters -> (..., 2k+2) ambient points on ∂K
    chart: ParamMap
    param_box: Box
    periodic_axes: FrozenSet[int]
    # sqrt(det) of the boundary chart's first fundamental form
    area_element: ParamMap
    # unit, tangent to the sphere, normal to ∂K, pointing out of K
    conormal: ParamMap
    # axis of the parent domain's parameter box that is frozen on ∂K
    normal_axis: int = -1

    def points(self, params: np.ndarray) -> SpherePoint:
        return SpherePoint(self.chart(params))

    def conormal_vectors(self, params: np.ndarray) -> TangentVector:
        return TangentVector(self.points(params), self.conormal(params))


@dataclass(frozen=True)
class Domain:
    """Region K ⊂ S^{2k+1} given by a chart over a parameter box."""

    label: str
    dim: SphereDim
    # (..., 2k+1) parameters -> (..., 2k+2) ambient points
    chart: ParamMap
    param_box: Box
    # sqrt(det G) of the chart's first fundamental form
    volume_element: ParamMap
    periodic_axes: FrozenSet[int] = field(default_factory=frozenset)
    boundary: Optional[BoundaryPatch] = None
    # closed-form vol(K) when known; checks 1.4 and 1.6 report it beside the quadrature value
    analytic_volume: Optional[float] = None

    def points(self, params: np.ndarray) -> SpherePoint:
        return SpherePoint(self.chart(params))

    @property
    def is_closed(self) -> bool:
        return self.boundary is None


@dataclass(frozen=True)
class MonteCarloSphere:
    """The whole sphere S^{2k+1}, integrated by uniform sampling."""

    dim: SphereDim
    samples: int
    seed: int
    label: str = "sphere"

    @property
    def is_closed(self) -> bool:
        return True

    @property
    def boundary(self) -> None:
        return None
