import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats, integers
from numpy.testing import assert_allclose

from unit_field_lab.errors import GeometryError
from unit_field_lab.geometry import (
    SphereDim,
    SpherePoint,
    TangentVector,
    complete_adapted_frame,
    geodesic,
    project_tangent,
    random_orthogonal_basis,
    random_sphere_points,
    sphere_volume,
)

seeds = integers(min_value=0, max_value=2**32 - 1)
arc = floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


class TestSphereDim:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_dimensions(self, k):
        dim = SphereDim(k)
        assert dim.ambient == 2 * k + 2
        assert dim.manifold == 2 * k + 1
        assert SphereDim.from_ambient(dim.ambient) == dim

    @pytest.mark.parametrize("k", [0, 4, -1])
    def test_rejects_out_of_range(self, k):
        with pytest.raises(GeometryError, match="k must be"):
            SphereDim(k)

    def test_rejects_odd_ambient(self):
        with pytest.raises(GeometryError):
            SphereDim.from_ambient(5)

    @pytest.mark.parametrize("k, expected", [(1, 2 * math.pi**2), (2, math.pi**3), (3, math.pi**4 / 3)])
    def test_sphere_volume(self, k, expected):
        assert_allclose(sphere_volume(SphereDim(k)), expected, rtol=1e-15)


class TestSpherePoint:
    def test_accepts_unit_vector(self):
        p = SpherePoint([1.0, 0.0, 0.0, 0.0])
        assert p.dim == SphereDim(1)
        assert p.batch_shape == ()

    def test_rejects_off_sphere(self):
        with pytest.raises(GeometryError, match="off the unit sphere"):
            SpherePoint([1.0, 1e-6, 0.0, 0.0])

    def test_coords_are_read_only(self):
        p = SpherePoint([0.0, 1.0, 0.0, 0.0])
        with pytest.raises(ValueError):
            p.coords[0] = 1.0

    def test_batches(self, rng):
        p = random_sphere_points(SphereDim(2), 50, rng)
        assert p.batch_shape == (50,)
        assert_allclose(np.linalg.norm(p.coords, axis=-1), 1.0, atol=1e-15)


class TestTangentVector:
    def test_rejects_normal_component(self):
        p = SpherePoint([1.0, 0.0, 0.0, 0.0])
        with pytest.raises(GeometryError, match="not tangent"):
            TangentVector(p, [1e-6, 1.0, 0.0, 0.0])

    def test_projection_is_tangent(self, rng):
        p = random_sphere_points(SphereDim(1), 100, rng)
        w = rng.standard_normal((100, 4))
        u = project_tangent(p, w)
        assert_allclose(np.einsum("ni,ni->n", u.vec, p.coords), 0.0, atol=1e-14)
        assert_allclose(project_tangent(p, u.vec).vec, u.vec, atol=1e-14)


class TestGeodesic:
    def test_quarter_great_circle(self):
        p = SpherePoint([1.0, 0.0, 0.0, 0.0])
        u = TangentVector(p, [0.0, 1.0, 0.0, 0.0])
        assert_allclose(geodesic(p, u, math.pi / 2).coords, [0.0, 1.0, 0.0, 0.0], atol=1e-15)

    def test_rejects_non_unit_direction(self):
        p = SpherePoint([1.0, 0.0, 0.0, 0.0])
        with pytest.raises(GeometryError, match="must be unit"):
            geodesic(p, TangentVector(p, [0.0, 2.0, 0.0, 0.0]), 0.1)

    @given(seed=seeds, s=arc)
    @settings(max_examples=50, deadline=None)
    def test_stays_on_sphere(self, seed, s):
        rng = np.random.default_rng(seed)
        p = random_sphere_points(SphereDim(1), 1, rng)
        u = project_tangent(p, rng.standard_normal((1, 4)))
        unit = TangentVector(p, u.vec / u.norm()[..., None])
        assert_allclose(np.linalg.norm(geodesic(p, unit, s).coords, axis=-1), 1.0, atol=1e-15)


class TestAdaptedFrame:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_orthonormal_and_ends_with_field(self, k, rng):
        dim = SphereDim(k)
        p = random_sphere_points(dim, 200, rng)
        v = project_tangent(p, rng.standard_normal((200, dim.ambient)))
        v = TangentVector(p, v.vec / v.norm()[..., None])
        frame = complete_adapted_frame(p, v)
        gram = np.einsum("nai,nbi->nab", frame.matrix, frame.matrix)
        assert_allclose(gram, np.broadcast_to(np.eye(2 * k + 1), gram.shape), atol=1e-12)
        assert_allclose(frame.matrix[:, -1], v.vec)
        assert len(frame.vectors) == 2 * k + 1

    @given(seed=seeds)
    @settings(max_examples=30, deadline=None)
    def test_any_rotated_seed_basis_works(self, seed):
        rng = np.random.default_rng(seed)
        p = SpherePoint([0.0, 0.0, 1.0, 0.0])
        v = TangentVector(p, [0.0, 0.0, 0.0, 1.0])
        frame = complete_adapted_frame(p, v, random_orthogonal_basis(4, rng))
        assert_allclose(np.abs(frame.e @ p.coords), 0.0, atol=1e-12)
        assert_allclose(np.abs(frame.e @ v.vec), 0.0, atol=1e-12)

    def test_rejects_non_unit_field(self):
        p = SpherePoint([1.0, 0.0, 0.0, 0.0])
        with pytest.raises(GeometryError, match="unit"):
            complete_adapted_frame(p, TangentVector(p, [0.0, 0.5, 0.0, 0.0]))

    def test_rejects_degenerate_seed_basis(self):
        p = SpherePoint([1.0, 0.0, 0.0, 0.0])
        v = TangentVector(p, [0.0, 1.0, 0.0, 0.0])
        seeds = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]])
        with pytest.raises(GeometryError, match="independent directions"):
            complete_adapted_frame(p, v, seeds)
