"""Pointwise shape data of a unit field: h_ij, σ_i, volume/energy densities, Milnor map.

All quantities consumed downstream (σ_i, Frobenius norms, Gram determinants) are
invariant under rotations of {e_1, ..., e_2k}; the frame itself is built per point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from unit_field_lab.constants import MILNOR_FD_STEP
from unit_field_lab.fields import FieldDefinition, covariant_derivative
from unit_field_lab.geometry import (
    AdaptedFrame,
    SpherePoint,
    complete_adapted_frame,
    geodesic,
)
from unit_field_lab.log import get_logger
from unit_field_lab.models.quadrature import MilnorMapConfig

logger = get_logger(__name__)

GramMode = Literal["full", "h_block"]


@dataclass(frozen=True)
class ShapeData:
    # h[i, j] = <∇_{e_i} v, e_j>, shape (..., 2k, 2k)
    h: np.ndarray
    # a_v[i] = <∇_v v, e_i>, shape (..., 2k)
    a_v: np.ndarray
    # σ_1 ... σ_2k, shape (..., 2k)
    sigma: np.ndarray
    frame: AdaptedFrame

    @property
    def derivative_matrix(self) -> np.ndarray:
        """Rows: e_j-components of ∇_{e_a} v for a = 1..2k, then of ∇_v v."""
        return np.concatenate([self.h, self.a_v[..., None, :]], axis=-2)


def elementary_symmetric(h: np.ndarray) -> np.ndarray:
    """Coefficients of det(I + t·h) in t, degrees 1..m, via Faddeev-LeVerrier."""
    h = np.asarray(h, dtype=float)
    m = h.shape[-1]
    eye = np.eye(m)
    aux = np.zeros_like(h)
    coeff = np.ones(h.shape[:-2])
    sigma = []
    for j in range(1, m + 1):
        aux = h @ aux + coeff[..., None, None] * eye
        coeff = -np.trace(h @ aux, axis1=-2, axis2=-1) / j
        sigma.append((-1) ** j * coeff)
    return np.stack(sigma, axis=-1)


def shape_data(f: FieldDefinition, p: SpherePoint, seed_basis: Optional[np.ndarray] = None) -> ShapeData:
    frame = complete_adapted_frame(p, f.evaluate(p), seed_basis)
    derivatives = np.stack([covariant_derivative(f, p, u).vec for u in frame.vectors], axis=-2)
    components = np.einsum("...ai,...ji->...aj", derivatives, frame.e)
    two_k = frame.e.shape[-2]
    h = components[..., :two_k, :]
    return ShapeData(h=h, a_v=components[..., two_k, :], sigma=elementary_symmetric(h), frame=frame)


def volume_density(sd: ShapeData, gram: GramMode = "full") -> np.ndarray:
    """sqrt(det(I + AᵀA)); gram="h_block" drops the ∇_v v row."""
    a = sd.derivative_matrix if gram == "full" else sd.h
    m = sd.h.shape[-1]
    gram_matrix = np.eye(m) + np.einsum("...ai,...aj->...ij", a, a)
    return np.sqrt(np.linalg.det(gram_matrix))


def energy_density(sd: ShapeData) -> np.ndarray:
    return np.sum(sd.h**2, axis=(-2, -1)) + np.sum(sd.a_v**2, axis=-1)


def jacobian_density(sd: ShapeData, t: float) -> np.ndarray:
    """sqrt(1 + t²)·(1 + Σ σ_i tⁱ)."""
    powers = t ** np.arange(1, sd.sigma.shape[-1] + 1)
    return np.sqrt(1.0 + t * t) * (1.0 + sd.sigma @ powers)


def volume_integrand(
    f: FieldDefinition, p: SpherePoint, gram: GramMode = "full", seed_basis: Optional[np.ndarray] = None
) -> np.ndarray:
    return volume_density(shape_data(f, p, seed_basis), gram)


def energy_integrand(f: FieldDefinition, p: SpherePoint, seed_basis: Optional[np.ndarray] = None) -> np.ndarray:
    """Σ h_ij² + Σ <∇_v v, e_i>², without the (2k+1)/2·vol(K) offset."""
    return energy_density(shape_data(f, p, seed_basis))


def milnor_map(f: FieldDefinition, p: SpherePoint, cfg: MilnorMapConfig) -> np.ndarray:
    """φ_t(x) = x + t·v(x), a point of the sphere of radius sqrt(1 + t²)."""
    return p.coords + cfg.t * f.formula(p.coords)


def milnor_jacobian(
    f: FieldDefinition, p: SpherePoint, cfg: MilnorMapConfig, seed_basis: Optional[np.ndarray] = None
) -> np.ndarray:
    values = jacobian_density(shape_data(f, p, seed_basis), cfg.t)
    if values.size and values.min() <= 0.0:
        logger.warning(
            f"det(dφ_t) is not positive for field '{f.label}' at t={cfg.t}",
            extra={"extra_data": {"min_jacobian": float(values.min()), "t": cfg.t}},
        )
    return values


def milnor_jacobian_fd(
    f: FieldDefinition,
    p: SpherePoint,
    cfg: MilnorMapConfig,
    step: float = MILNOR_FD_STEP,
    seed_basis: Optional[np.ndarray] = None,
) -> np.ndarray:
    """det(dφ_t) by central differences along the source frame, read in the target frame.

    Source frame {e_1..e_2k, v} at p; target frame {e_1..e_2k, (v - t p)/sqrt(1 + t²)}
    at φ_t(p), both orthonormal, so the determinant is the volume distortion.
    """
    t = cfg.t
    frame = complete_adapted_frame(p, f.evaluate(p), seed_basis)
    target_normal = (frame.v - t * p.coords) / np.sqrt(1.0 + t * t)
    target = np.concatenate([frame.e, target_normal[..., None, :]], axis=-2)

    columns = []
    for u in frame.vectors:
        ahead = geodesic(p, u, step).coords
        behind = geodesic(p, u, -step).coords
        phi_ahead = ahead + t * f.formula(ahead)
        phi_behind = behind + t * f.formula(behind)
        columns.append((phi_ahead - phi_behind) / (2.0 * step))
    differential = np.stack(columns, axis=-2)
    matrix = np.einsum("...ai,...bi->...ab", differential, target)
    return np.linalg.det(matrix)
