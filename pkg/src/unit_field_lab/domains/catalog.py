"""Catalog domains on S³: the solid torus K, its complement K^c and the whole sphere."""

from __future__ import annotations

import math
from typing import Callable, Dict, List, Optional

import numpy as np

from unit_field_lab.constants import DEFAULT_MC_SAMPLES, DEFAULT_SEED
from unit_field_lab.domains.custom import custom_domain_from_file
from unit_field_lab.domains.quadrature import monte_carlo_sphere
from unit_field_lab.domains.schema import BoundaryPatch, Domain
from unit_field_lab.errors import ConfigurationError
from unit_field_lab.geometry import SphereDim
from unit_field_lab.models import QuadratureSpec

TWO_PI = 2.0 * math.pi
CLIFFORD_DELTA = 1.0 / math.sqrt(2.0)


def _check_delta(delta_max: float) -> float:
    delta_max = float(delta_max)
    if not 0.0 < delta_max < 1.0:
        raise ConfigurationError(f"delta_max must lie in (0, 1), got {delta_max}")
    return delta_max


def _torus_chart(inner_first: bool) -> Callable[[np.ndarray], np.ndarray]:
    """(θ, α, δ) -> point whose first (or second) complex coordinate has modulus δ."""

    def chart(params: np.ndarray) -> np.ndarray:
        theta, alpha, delta = params[..., 0], params[..., 1], params[..., 2]
        rest = np.sqrt(1.0 - delta**2)
        a, b = (delta, rest) if inner_first else (rest, delta)
        return np.stack([a * np.cos(theta), a * np.sin(theta), b * np.cos(alpha), b * np.sin(alpha)], axis=-1)

    return chart


def _torus_boundary(inner_first: bool, delta: float) -> BoundaryPatch:
    chart = _torus_chart(inner_first)
    rest = math.sqrt(1.0 - delta**2)
    # normalized ∂x/∂δ: grows the δ-modulus pair, shrinks the other
    a, b = (rest, -delta) if inner_first else (-delta, rest)

    def boundary_chart(params: np.ndarray) -> np.ndarray:
        full = np.concatenate([params, np.full(params.shape[:-1] + (1,), delta)], axis=-1)
        return chart(full)

    def conormal(params: np.ndarray) -> np.ndarray:
        theta, alpha = params[..., 0], params[..., 1]
        return np.stack([a * np.cos(theta), a * np.sin(theta), b * np.cos(alpha), b * np.sin(alpha)], axis=-1)

    def area_element(params: np.ndarray) -> np.ndarray:
        return np.full(params.shape[:-1], delta * rest)

    return BoundaryPatch(
        chart=boundary_chart,
        param_box=((0.0, TWO_PI), (0.0, TWO_PI)),
        periodic_axes=frozenset({0, 1}),
        area_element=area_element,
        conormal=conormal,
        normal_axis=2,
    )


def _delta_element(params: np.ndarray) -> np.ndarray:
    return params[..., 2].copy()


def solid_torus(delta_max: float = CLIFFORD_DELTA) -> Domain:
    """x(θ, α, δ) = (δcosθ, δsinθ, √(1-δ²)cosα, √(1-δ²)sinα), δ ∈ [0, delta_max]."""
    delta_max = _check_delta(delta_max)
    return Domain(
        label=f"solid_torus({delta_max:.15g})",
        dim=SphereDim(1),
        chart=_torus_chart(inner_first=True),
        param_box=((0.0, TWO_PI), (0.0, TWO_PI), (0.0, delta_max)),
        volume_element=_delta_element,
        periodic_axes=frozenset({0, 1}),
        boundary=_torus_boundary(inner_first=True, delta=delta_max),
        analytic_volume=2.0 * math.pi**2 * delta_max**2,
    )


def complement_torus(delta_max: float = CLIFFORD_DELTA) -> Domain:
    """K^c with its own chart y(θ, α, δ), δ ∈ [0, √(1 - delta_max²)]; conormal points out of K^c."""
    delta_max = _check_delta(delta_max)
    reach = math.sqrt(1.0 - delta_max**2)
    return Domain(
        label=f"complement({delta_max:.15g})",
        dim=SphereDim(1),
        chart=_torus_chart(inner_first=False),
        param_box=((0.0, TWO_PI), (0.0, TWO_PI), (0.0, reach)),
        volume_element=_delta_element,
        periodic_axes=frozenset({0, 1}),
        boundary=_torus_boundary(inner_first=False, delta=reach),
        analytic_volume=2.0 * math.pi**2 * reach**2,
    )


def _hopf_coordinates(params: np.ndarray) -> np.ndarray:
    theta, alpha, eta = params[..., 0], params[..., 1], params[..., 2]
    c, s = np.cos(eta), np.sin(eta)
    return np.stack([c * np.cos(theta), c * np.sin(theta), s * np.cos(alpha), s * np.sin(alpha)], axis=-1)


def _hopf_element(params: np.ndarray) -> np.ndarray:
    eta = params[..., 2]
    return np.sin(eta) * np.cos(eta)


def full_sphere(dim: SphereDim = SphereDim(1), samples: int = DEFAULT_MC_SAMPLES, seed: int = DEFAULT_SEED):
    """S³ through Hopf coordinates; higher spheres are sampled by Monte Carlo."""
    if dim.k >= 2:
        return monte_carlo_sphere(dim, QuadratureSpec(mc_samples=samples, rng_seed=seed))
    return Domain(
        label="sphere",
        dim=dim,
        chart=_hopf_coordinates,
        param_box=((0.0, TWO_PI), (0.0, TWO_PI), (0.0, 0.5 * math.pi)),
        volume_element=_hopf_element,
        periodic_axes=frozenset({0, 1}),
        analytic_volume=2.0 * math.pi**2,
    )


def _delta_arg(arg: Optional[str]) -> float:
    if not arg:
        return CLIFFORD_DELTA
    try:
        return float(arg)
    except ValueError as e:
        raise ConfigurationError(f"Invalid delta_max '{arg}'") from e


def _k1_only(name: str, dim: SphereDim) -> None:
    if dim.k != 1:
        raise ConfigurationError(f"Domain '{name}' is a chart on S³; use 'sphere' for k={dim.k}")


def _solid_torus_builder(arg, dim, q):
    _k1_only("solid_torus", dim)
    return solid_torus(_delta_arg(arg))


def _complement_builder(arg, dim, q):
    _k1_only("complement", dim)
    return complement_torus(_delta_arg(arg))


def _sampled(dim: SphereDim, q: QuadratureSpec):
    if q.mc_samples is None:
        q = q.model_copy(update={"mc_samples": DEFAULT_MC_SAMPLES})
    return monte_carlo_sphere(dim, q)


def _sphere_builder(arg, dim, q):
    if arg == "mc":
        return _sampled(dim, q)
    if arg:
        raise ConfigurationError(f"'sphere' takes no argument other than 'mc', got '{arg}'")
    if dim.k >= 2:
        return _sampled(dim, q)
    return full_sphere(dim)


def _custom_builder(arg, dim, q):
    if not arg:
        raise ConfigurationError("Expected 'custom:<path>'")
    domain = custom_domain_from_file(arg, seed=q.rng_seed)
    if domain.dim != dim:
        raise ConfigurationError(f"Custom domain lives on k={domain.dim.k}, field needs k={dim.k}")
    return domain


DOMAINS: Dict[str, Callable] = {
    "solid_torus": _solid_torus_builder,
    "complement": _complement_builder,
    "sphere": _sphere_builder,
    "custom": _custom_builder,
}


def resolve_domain(spec: str, dim: SphereDim = SphereDim(1), q: Optional[QuadratureSpec] = None):
    """solid_torus:<d> | complement:<d> | sphere[:mc] | custom:<path>.

    Monte Carlo spheres take their sample count (DEFAULT_MC_SAMPLES when unset) and seed from q.
    """
    name, _, arg = spec.strip().partition(":")
    if name not in DOMAINS:
        available = ", ".join(sorted(DOMAINS))
        raise ConfigurationError(f"Unknown domain '{name}'. Available: {available}")
    return DOMAINS[name](arg or None, dim, q or QuadratureSpec())


def domain_names() -> List[str]:
    return sorted(DOMAINS)
