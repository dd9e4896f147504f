"""Integrated functionals of a unit field over a domain.

Every functional returns a FunctionalResult carrying the quadrature that produced
it, so report numbers can always be traced back to their nodes.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, replace
from typing import Callable, Tuple

import numpy as np

from unit_field_lab.constants import JACOBIAN_CHECK_SAMPLES, N_JOBS
from unit_field_lab.domains import (
    Estimate,
    MonteCarloSphere,
    domain_volume,
    estimate,
    integrate_boundary,
)
from unit_field_lab.domains.quadrature import AnyDomain, sample_stream, tensor_grid
from unit_field_lab.fields import FieldDefinition
from unit_field_lab.geometry import SpherePoint, inner, sphere_volume
from unit_field_lab.log import get_logger
from unit_field_lab.models import FunctionalResult, MilnorMapConfig, QuadratureSpec
from unit_field_lab.shape import (
    GramMode,
    ShapeData,
    energy_density,
    jacobian_density,
    milnor_jacobian,
    milnor_jacobian_fd,
    shape_data,
    volume_density,
)

logger = get_logger(__name__)

Density = Callable[[ShapeData], np.ndarray]


class _Extremes:
    """Running min and max|.| of an integrand across concurrently evaluated chunks."""

    def __init__(self):
        self._lock = threading.Lock()
        self.minimum = math.inf
        self.max_abs = 0.0

    def update(self, values: np.ndarray) -> None:
        if values.size == 0:
            return
        with self._lock:
            self.minimum = min(self.minimum, float(values.min()))
            self.max_abs = max(self.max_abs, float(np.abs(values).max()))


def quadrature_echo(dom: AnyDomain, q: QuadratureSpec) -> QuadratureSpec:
    if isinstance(dom, MonteCarloSphere):
        return q.model_copy(update={"mc_samples": dom.samples, "rng_seed": dom.seed})
    return q


def integrate_density(
    f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, density: Density, n_jobs: int = N_JOBS
) -> Tuple[Estimate, _Extremes]:
    """∫ density(shape data) over the domain, tracking the pointwise extremes."""
    extremes = _Extremes()

    def integrand(p: SpherePoint) -> np.ndarray:
        values = density(shape_data(f, p))
        extremes.update(values)
        return values

    return estimate(dom, q, integrand, n_jobs), extremes


def _result(name, est: Estimate, f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, **extra) -> FunctionalResult:
    result = FunctionalResult(
        name=name,
        value=est.value,
        stderr=est.stderr,
        domain_label=dom.label,
        field_label=f.label,
        method=est.method,
        nodes=est.nodes,
        quadrature=quadrature_echo(dom, q),
        **extra,
    )
    logger.debug(
        f"{name} of {f.label} over {dom.label}",
        extra={"extra_data": {"value": result.value, "stderr": result.stderr, "t": result.t}},
    )
    return result


def domain_volume_of(f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec) -> FunctionalResult:
    return _result("domain_volume", domain_volume(dom, q), f, dom, q)


def volume_of_field(
    f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, gram: GramMode = "full", n_jobs: int = N_JOBS
) -> FunctionalResult:
    est, _ = integrate_density(f, dom, q, lambda sd: volume_density(sd, gram), n_jobs)
    return _result("volume", est, f, dom, q)


def energy_of_field(f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, n_jobs: int = N_JOBS) -> FunctionalResult:
    """(2k+1)/2·vol(K) + 1/2·∫(Σ h_ij² + Σ <∇_v v, e_i>²)."""
    vol = domain_volume(dom, q)
    est, _ = integrate_density(f, dom, q, energy_density, n_jobs)
    n = f.dim.manifold
    combined = Estimate(
        value=0.5 * n * vol.value + 0.5 * est.value,
        stderr=math.hypot(0.5 * n * vol.stderr, 0.5 * est.stderr),
        nodes=est.nodes,
        method=est.method,
    )
    return _result("energy", combined, f, dom, q)


def sigma_integral(
    f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, order: int, n_jobs: int = N_JOBS
) -> Tuple[FunctionalResult, float]:
    """∫σ_order and max|σ_order| over the nodes, order 1 or 2."""
    if order not in (1, 2):
        raise ValueError(f"Only σ_1 and σ_2 integrals are reported, got order {order}")
    est, extremes = integrate_density(f, dom, q, lambda sd: sd.sigma[..., order - 1], n_jobs)
    name = "sigma1_integral" if order == 1 else "sigma2_integral"
    return _result(name, est, f, dom, q), extremes.max_abs


def pushforward_volume(
    f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, t: float, n_jobs: int = N_JOBS
) -> FunctionalResult:
    """vol(φ_t(K)) = ∫ det(dφ_t); a non-positive determinant at any node is a status, not an error."""
    est, extremes = integrate_density(f, dom, q, lambda sd: jacobian_density(sd, t), n_jobs)
    status = "ok" if extremes.minimum > 0.0 else "not_a_diffeomorphism"
    if status != "ok":
        logger.warning(
            f"φ_t is not a diffeomorphism on {dom.label} at t={t}",
            extra={"extra_data": {"field": f.label, "min_jacobian": extremes.minimum, "t": t}},
        )
    return _result("pushforward_volume", est, f, dom, q, t=t, status=status, min_jacobian=extremes.minimum)


def _spread_nodes(dom: AnyDomain, q: QuadratureSpec, count: int) -> SpherePoint:
    if isinstance(dom, MonteCarloSphere):
        return next(sample_stream(replace(dom, samples=min(dom.samples, count))))
    params, _ = tensor_grid(dom.param_box, dom.periodic_axes, q)
    picks = np.unique(np.linspace(0, len(params) - 1, min(count, len(params))).round().astype(int))
    return dom.points(params[picks])


def jacobian_crosscheck(
    f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, t: float, count: int = JACOBIAN_CHECK_SAMPLES
) -> float:
    """max |closed-form det(dφ_t) - central-difference det(dφ_t)| over nodes spread through the grid."""
    p = _spread_nodes(dom, q, count)
    cfg = MilnorMapConfig(t=t)
    return float(np.abs(milnor_jacobian(f, p, cfg) - milnor_jacobian_fd(f, p, cfg)).max())


@dataclass(frozen=True)
class PvpAssessment:
    ratio: float
    pushforward: FunctionalResult
    domain_volume: FunctionalResult
    # vol(φ_t(K)) - vol(K)(1+t²)^{(2k+1)/2}, the equivalent form of the property
    excess: float

    @property
    def holds(self) -> bool:
        return self.ratio >= 1.0

    @property
    def diffeomorphic(self) -> bool:
        return self.pushforward.status == "ok"


def assess_pvp(
    f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, t: float, n_jobs: int = N_JOBS
) -> PvpAssessment:
    """[vol(φ_t(K)) / vol(S(√(1+t²)))] ÷ [vol(K) / vol(S)] with the equivalent form as a cross-check."""
    push = pushforward_volume(f, dom, q, t, n_jobs)
    vol = domain_volume_of(f, dom, q)
    target = sphere_volume(f.dim, math.sqrt(1.0 + t * t))
    ratio = (push.value / target) / (vol.value / sphere_volume(f.dim))
    scale = (1.0 + t * t) ** (0.5 * f.dim.manifold)
    excess = push.value - vol.value * scale
    # ratio >= 1 and excess >= 0 must agree up to rounding
    if (ratio >= 1.0) != (excess >= 0.0) and abs(ratio - 1.0) > 1e-12:
        logger.warning(
            "Proportional volume forms disagree",
            extra={"extra_data": {"ratio": ratio, "excess": excess, "t": t, "domain": dom.label}},
        )
    return PvpAssessment(ratio=ratio, pushforward=push, domain_volume=vol, excess=excess)


def pvp_ratio(f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, t: float, n_jobs: int = N_JOBS) -> float:
    return assess_pvp(f, dom, q, t, n_jobs).ratio


def flux(f: FieldDefinition, dom: AnyDomain, q: QuadratureSpec, n_jobs: int = N_JOBS) -> FunctionalResult:
    """∫_{∂K} <v, η>; zero on domains without boundary."""
    b = getattr(dom, "boundary", None)
    if b is None:
        est = Estimate(value=0.0, stderr=0.0, nodes=0, method="tensor")
    else:
        value = integrate_boundary(b, q, lambda p, eta: inner(f.formula(p.coords), eta.vec), n_jobs)
        nodes = list(q.nodes_per_axis)
        if len(nodes) == len(b.param_box) + 1:
            nodes.pop(b.normal_axis)
        est = Estimate(value=value, stderr=0.0, nodes=int(np.prod(nodes)), method="tensor")
    return _result("flux", est, f, dom, q)

