"""Covariant differentiation of unit fields on the round sphere.

The Levi-Civita connection of S^{2k+1} is the tangential projection of the
ambient directional derivative, so ∇_u v = P_p(Dv(p)·u).
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from unit_field_lab.constants import FD_RICHARDSON_TOL, FD_STEP, TANGENT_TOL
from unit_field_lab.errors import ConfigurationError, NonSmoothFieldError
from unit_field_lab.fields.schema import FieldDefinition
from unit_field_lab.geometry import (
    SpherePoint,
    TangentVector,
    complete_adapted_frame,
    geodesic,
    inner,
    project_tangent,
    random_sphere_points,
)
from unit_field_lab.log import get_logger

logger = get_logger(__name__)


def _central_difference(f: FieldDefinition, p: SpherePoint, u: TangentVector, h: float) -> np.ndarray:
    forward = f.formula(geodesic(p, u, h).coords)
    backward = f.formula(geodesic(p, u, -h).coords)
    return (forward - backward) / (2.0 * h)


def covariant_derivative(
    f: FieldDefinition, p: SpherePoint, u: TangentVector, step: float = FD_STEP
) -> TangentVector:
    """∇_u v at p, from the exact Jacobian when available, else central differences."""
    if f.has_exact_jacobian:
        directional = np.einsum("...ij,...j->...i", f.jacobian(p), u.vec)
        return project_tangent(p, directional)

    coarse = _central_difference(f, p, u, step)
    fine = _central_difference(f, p, u, step / 2.0)
    gap = np.abs(coarse - fine).max(axis=-1)
    if gap.size and gap.max() > FD_RICHARDSON_TOL:
        worst = np.unravel_index(int(np.argmax(gap)), gap.shape) if gap.shape else ()
        point = p.coords[worst] if gap.shape else p.coords
        raise NonSmoothFieldError(
            f"Field '{f.label}' is not smooth at {np.round(point, 6).tolist()}: "
            f"h and h/2 estimates differ by {gap.max():.3e}",
            point=point,
            discrepancy=float(gap.max()),
        )
    return project_tangent(p, coarse)


def divergence(f: FieldDefinition, p: SpherePoint, seed_basis: Optional[np.ndarray] = None) -> np.ndarray:
    """Σ_a <∇_{e_a} v, e_a> over a full adapted frame; equals σ_1."""
    frame = complete_adapted_frame(p, f.evaluate(p), seed_basis)
    total = np.zeros(p.batch_shape)
    for direction in frame.vectors:
        total = total + inner(covariant_derivative(f, p, direction).vec, direction.vec)
    return total


def boundary_mismatch(f: FieldDefinition, g: FieldDefinition, p: SpherePoint) -> float:
    """Max-norm distance between two fields over the given points."""
    if p.coords.size == 0:
        return 0.0
    return float(np.abs(f.formula(p.coords) - g.formula(p.coords)).max())


def validate_field(f: FieldDefinition, rng: np.random.Generator, samples: int = 1000) -> float:
    """Check unit tangency on random points; returns the worst deviation."""
    p = random_sphere_points(f.dim, samples, rng)
    values = f.formula(p.coords)
    if not np.all(np.isfinite(values)):
        raise ConfigurationError(f"Field '{f.label}' is not finite on the sphere (vanishing or singular formula)")
    deviation = max(
        float(np.abs(np.linalg.norm(values, axis=-1) - 1.0).max()),
        float(np.abs(inner(values, p.coords)).max()),
    )
    if deviation > TANGENT_TOL:
        raise ConfigurationError(f"Field '{f.label}' is not a unit tangent field: deviation {deviation:.3e}")
    logger.debug(f"Validated field '{f.label}'", extra={"extra_data": {"samples": samples, "deviation": deviation}})
    return deviation
