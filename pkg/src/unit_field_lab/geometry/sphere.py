"""Points, tangent vectors, geodesics and adapted frames on S^{2k+1} ⊂ R^{2k+2}.

Every object carries ambient coordinates and may hold a batch of points: the last
axis is the ambient axis, leading axes are batch axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np

from unit_field_lab.constants import (
    FRAME_SKIP_TOL,
    MAX_K,
    SPHERE_TOL,
    TANGENT_TOL,
    UNIT_DIRECTION_TOL,
)
from unit_field_lab.errors import GeometryError

ArrayLike = Union[np.ndarray, List[float], tuple]


def inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", a, b)


def _frozen_array(values: ArrayLike) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SphereDim:
    """Sphere S^{2k+1}, ambient space R^{2k+2}."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or not 1 <= self.k <= MAX_K:
            raise GeometryError(f"k must be an integer in [1, {MAX_K}], got {self.k!r}")

    @property
    def ambient(self) -> int:
        return 2 * self.k + 2

    @property
    def manifold(self) -> int:
        return 2 * self.k + 1

    @classmethod
    def from_ambient(cls, n: int) -> "SphereDim":
        if n % 2 or n < 4:
            raise GeometryError(f"Ambient dimension must be even and >= 4, got {n}")
        return cls((n - 2) // 2)


@dataclass(frozen=True)
class SpherePoint:
    coords: np.ndarray

    def __post_init__(self):
        coords = _frozen_array(self.coords)
        object.__setattr__(self, "coords", coords)
        SphereDim.from_ambient(coords.shape[-1])
        deviation = np.abs(np.linalg.norm(coords, axis=-1) - 1.0)
        if deviation.size and deviation.max() > SPHERE_TOL:
            raise GeometryError(f"Point off the unit sphere by {deviation.max():.3e}")

    @property
    def dim(self) -> SphereDim:
        return SphereDim.from_ambient(self.coords.shape[-1])

    @property
    def batch_shape(self) -> tuple:
        return self.coords.shape[:-1]

    def __len__(self) -> int:
        return int(np.prod(self.batch_shape)) if self.batch_shape else 1


@dataclass(frozen=True)
class TangentVector:
    base: SpherePoint
    vec: np.ndarray

    def __post_init__(self):
        vec = _frozen_array(self.vec)
        object.__setattr__(self, "vec", vec)
        if vec.shape[-1] != self.base.coords.shape[-1]:
            raise GeometryError(
                f"Vector has {vec.shape[-1]} components, base point has {self.base.coords.shape[-1]}"
            )
        normal = np.abs(inner(vec, self.base.coords))
        scale = np.maximum(1.0, np.linalg.norm(vec, axis=-1))
        if normal.size and (normal / scale).max() > TANGENT_TOL:
            raise GeometryError(f"Vector not tangent: |<vec, p>| = {normal.max():.3e}")

    def norm(self) -> np.ndarray:
        return np.linalg.norm(self.vec, axis=-1)


@dataclass(frozen=True)
class AdaptedFrame:
    """Orthonormal frame {e_1, ..., e_2k, v} whose last vector is the field."""

    base: SpherePoint
    e: np.ndarray  # (..., 2k, n)
    v: np.ndarray  # (..., n)

    def __post_init__(self):
        e = _frozen_array(self.e)
        v = _frozen_array(self.v)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "v", v)
        k = self.base.dim.k
        if e.shape[-2] != 2 * k:
            raise GeometryError(f"Frame needs {2 * k} complementary vectors, got {e.shape[-2]}")
        full = self.matrix
        gram = np.einsum("...ai,...bi->...ab", full, full)
        err = np.abs(gram - np.eye(2 * k + 1)).max(initial=0.0)
        tangency = np.abs(np.einsum("...ai,...i->...a", full, self.base.coords)).max(initial=0.0)
        if err > TANGENT_TOL or tangency > TANGENT_TOL:
            raise GeometryError(
                f"Frame not orthonormal/tangent: gram error {err:.3e}, normal component {tangency:.3e}"
            )

    @property
    def matrix(self) -> np.ndarray:
        """Rows e_1, ..., e_2k, v stacked, shape (..., 2k+1, n)."""
        return np.concatenate([self.e, self.v[..., None, :]], axis=-2)

    @property
    def vectors(self) -> List[TangentVector]:
        return [TangentVector(self.base, self.e[..., a, :]) for a in range(self.e.shape[-2])] + [
            TangentVector(self.base, self.v)
        ]


def project_tangent(p: SpherePoint, w: ArrayLike) -> TangentVector:
    """Tangential part w - <w, p> p, the Levi-Civita projection of ambient derivatives."""
    w = np.asarray(w, dtype=float)
    x = p.coords
    return TangentVector(p, w - inner(w, x)[..., None] * x)


def geodesic(p: SpherePoint, u: TangentVector, s: Union[float, np.ndarray]) -> SpherePoint:
    norm = u.norm()
    if np.abs(norm - 1.0).max(initial=0.0) > UNIT_DIRECTION_TOL:
        raise GeometryError(f"Geodesic direction must be unit, |u| deviates by {np.abs(norm - 1.0).max():.3e}")
    direction = u.vec / norm[..., None]
    s = np.asarray(s, dtype=float)[..., None]
    point = np.cos(s) * p.coords + np.sin(s) * direction
    # absorb the last ulp so the result passes the on-sphere check
    return SpherePoint(point / np.linalg.norm(point, axis=-1, keepdims=True))


def complete_adapted_frame(
    p: SpherePoint, v: TangentVector, seed_basis: Optional[ArrayLike] = None
) -> AdaptedFrame:
    """Gram-Schmidt the seed basis over {p, v}^⊥, skipping near-degenerate candidates.

    seed_basis rows are the ordered ambient seed vectors (identity by default).
    """
    x = p.coords
    n = x.shape[-1]
    k = p.dim.k
    seeds = np.eye(n) if seed_basis is None else np.asarray(seed_basis, dtype=float)
    if seeds.shape != (n, n):
        raise GeometryError(f"Seed basis must be {n}x{n}, got {seeds.shape}")
    vnorm = v.norm()
    if np.abs(vnorm - 1.0).max(initial=0.0) > UNIT_DIRECTION_TOL:
        raise GeometryError("Field direction must be a unit vector")
    vv = v.vec

    batch = x.shape[:-1]
    flat_x = x.reshape(-1, n)
    flat_v = vv.reshape(-1, n)
    m = flat_x.shape[0]
    e = np.zeros((m, 2 * k, n))
    count = np.zeros(m, dtype=int)
    rows = np.arange(m)

    for seed in seeds:
        cand = np.broadcast_to(seed, (m, n)).copy()
        # two passes keep orthogonality near machine precision for small candidates
        for _ in range(2):
            cand -= inner(cand, flat_x)[:, None] * flat_x
            cand -= inner(cand, flat_v)[:, None] * flat_v
            cand -= np.einsum("mb,mbi->mi", np.einsum("mi,mbi->mb", cand, e), e)
        norm = np.linalg.norm(cand, axis=-1)
        accept = (norm > FRAME_SKIP_TOL) & (count < 2 * k)
        if accept.any():
            idx = rows[accept]
            e[idx, count[idx]] = cand[idx] / norm[idx, None]
            count[idx] += 1

    if (count < 2 * k).any():
        raise GeometryError(
            f"Only {count.min()} independent directions found, {2 * k} required; input is corrupted"
        )
    return AdaptedFrame(p, e.reshape(batch + (2 * k, n)), vv)


def complex_structure(dim: SphereDim) -> np.ndarray:
    """Matrix of multiplication by i on R^{2k+2} ≅ C^{k+1}: (x, y) -> (-y, x) per pair."""
    block = np.array([[0.0, -1.0], [1.0, 0.0]])
    return np.kron(np.eye(dim.k + 1), block)


def sphere_volume(dim: SphereDim, radius: float = 1.0) -> float:
    return 2.0 * math.pi ** (dim.k + 1) / math.factorial(dim.k) * radius ** dim.manifold


def random_sphere_points(dim: SphereDim, count: int, rng: np.random.Generator) -> SpherePoint:
    gauss = rng.standard_normal((count, dim.ambient))
    return SpherePoint(gauss / np.linalg.norm(gauss, axis=1, keepdims=True))


def random_orthogonal_basis(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
