import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers
from numpy.testing import assert_allclose

from conftest import TILTED_HOPF

from unit_field_lab.fields import custom_field, hopf
from unit_field_lab.geometry import SphereDim, SpherePoint, random_orthogonal_basis, random_sphere_points
from unit_field_lab.models import MilnorMapConfig
from unit_field_lab.shape import (
    elementary_symmetric,
    energy_integrand,
    milnor_jacobian,
    milnor_jacobian_fd,
    milnor_map,
    shape_data,
    volume_integrand,
)

seeds = integers(min_value=0, max_value=2**32 - 1)


class TestElementarySymmetric:
    @pytest.mark.parametrize("m", [2, 4, 6])
    def test_matches_eigenvalues(self, m, rng):
        h = rng.standard_normal((20, m, m))
        sigma = elementary_symmetric(h)
        for matrix, row in zip(h, sigma):
            # np.poly: c_j = (-1)^j e_j(eigenvalues)
            coeffs = np.real(np.poly(np.linalg.eigvals(matrix)))[1:]
            signs = (-1.0) ** np.arange(1, m + 1)
            assert_allclose(row, signs * coeffs, rtol=1e-9, atol=1e-9)

    def test_trace_and_determinant(self, rng):
        h = rng.standard_normal((100, 4, 4))
        sigma = elementary_symmetric(h)
        assert_allclose(sigma[:, 0], np.trace(h, axis1=1, axis2=2), atol=1e-12)
        assert_allclose(sigma[:, -1], np.linalg.det(h), atol=1e-10)


class TestHopfShape:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_pointwise_values(self, k, rng):
        dim = SphereDim(k)
        f = hopf(dim)
        p = random_sphere_points(dim, 100, rng)
        sd = shape_data(f, p)
        assert_allclose(sd.sigma[:, 0], 0.0, atol=1e-13)
        assert_allclose(sd.sigma[:, 1], k, atol=1e-12)
        assert_allclose(sd.a_v, 0.0, atol=1e-14)
        assert_allclose(volume_integrand(f, p), 2.0**k, rtol=1e-13)
        assert_allclose(energy_integrand(f, p), 2.0 * k, rtol=1e-13)

    def test_jacobian_closed_form(self, rng):
        f = hopf(SphereDim(1))
        p = random_sphere_points(SphereDim(1), 100, rng)
        for t in (0.0, 0.1, 0.5, 2.0):
            expected = math.sqrt(1 + t * t) * (1 + t * t)
            assert_allclose(milnor_jacobian(f, p, MilnorMapConfig(t=t)), expected, rtol=1e-13)

    def test_h_block_differs_only_by_the_v_row(self, rng):
        f = hopf(SphereDim(1))
        p = random_sphere_points(SphereDim(1), 10, rng)
        # ∇_H H = 0, so both Gram variants agree for the Hopf flow
        assert_allclose(volume_integrand(f, p, gram="h_block"), volume_integrand(f, p), rtol=1e-14)


class TestMilnorMap:
    def test_identity_at_zero(self, hopf1, rng):
        p = random_sphere_points(SphereDim(1), 10, rng)
        assert_allclose(milnor_map(hopf1, p, MilnorMapConfig(t=0.0)), p.coords)
        assert_allclose(milnor_jacobian(hopf1, p, MilnorMapConfig(t=0.0)), 1.0)

    def test_hopf_example(self, hopf1):
        image = milnor_map(hopf1, SpherePoint([1.0, 0.0, 0.0, 0.0]), MilnorMapConfig(t=1.0))
        assert_allclose(image, [1.0, 1.0, 0.0, 0.0])
        assert_allclose(np.linalg.norm(image), math.sqrt(2.0))

    def test_image_radius(self, v_lambda, rng):
        p = random_sphere_points(SphereDim(1), 100, rng)
        for t in (0.05, 0.3, 1.7):
            image = milnor_map(v_lambda, p, MilnorMapConfig(t=t))
            assert_allclose(np.sum(image**2, axis=-1), 1.0 + t * t, rtol=1e-12)

    def test_negative_t_rejected(self):
        with pytest.raises(ValueError):
            MilnorMapConfig(t=-0.1)

    @pytest.mark.parametrize("t", [0.05, 0.1, 0.25])
    def test_closed_form_matches_finite_differences(self, v_lambda, t, rng):
        p = random_sphere_points(SphereDim(1), 1000, rng)
        cfg = MilnorMapConfig(t=t)
        assert_allclose(milnor_jacobian(v_lambda, p, cfg), milnor_jacobian_fd(v_lambda, p, cfg), atol=1e-6)

    def test_finite_differences_are_positive_near_zero(self, rng):
        f = custom_field(TILTED_HOPF)
        p = random_sphere_points(SphereDim(1), 200, rng)
        assert (milnor_jacobian_fd(f, p, MilnorMapConfig(t=1e-3)) > 0.0).all()


class TestPointwiseInequalities:
    def test_frobenius_bounds_sigma2(self, v_lambda, rng):
        p = random_sphere_points(SphereDim(1), 10_000, rng)
        sd = shape_data(v_lambda, p)
        assert (np.sum(sd.h**2, axis=(-2, -1)) >= 2.0 * sd.sigma[:, 1] - 1e-12).all()

    def test_volume_dominates_one_plus_sigma2(self, v_lambda, rng):
        p = random_sphere_points(SphereDim(1), 10_000, rng)
        sd = shape_data(v_lambda, p)
        assert (volume_integrand(v_lambda, p) >= 1.0 + sd.sigma[:, 1] - 1e-12).all()


class TestFrameInvariance:
    @given(seed=seeds)
    @settings(max_examples=100, deadline=None)
    def test_rotated_seed_basis(self, seed):
        rng = np.random.default_rng(seed)
        p = random_sphere_points(SphereDim(1), 100, rng)
        basis = random_orthogonal_basis(4, rng)
        for f in (hopf(SphereDim(1)), custom_field(TILTED_HOPF)):
            ref, rotated = shape_data(f, p), shape_data(f, p, basis)
            assert_allclose(rotated.sigma, ref.sigma, atol=1e-9)
            assert_allclose(volume_integrand(f, p, seed_basis=basis), volume_integrand(f, p), atol=1e-9)
            assert_allclose(energy_integrand(f, p, seed_basis=basis), energy_integrand(f, p), atol=1e-9)
