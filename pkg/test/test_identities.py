import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers, sampled_from
from numpy.testing import assert_allclose

from unit_field_lab.models import CheckStatus
from unit_field_lab.shape import elementary_symmetric
from unit_field_lab.suite import check_algebraic_identities
from unit_field_lab.suite.identities import IDENTITIES, random_trace_free

seeds = integers(min_value=0, max_value=2**32 - 1)


class TestRandomTraceFree:
    @pytest.mark.parametrize("size", [2, 4, 6])
    def test_trace_vanishes(self, size, rng):
        h = random_trace_free(size, 500, rng)
        assert h.shape == (500, size, size)
        assert_allclose(np.trace(h, axis1=-2, axis2=-1), 0.0, atol=1e-13)
        assert_allclose(elementary_symmetric(h)[..., 0], 0.0, atol=1e-12)


class TestIdentities:
    @given(seed=seeds, size=sampled_from([2, 4, 6]))
    @settings(max_examples=50, deadline=None)
    def test_each_identity_on_random_matrices(self, seed, size):
        h = random_trace_free(size, 200, np.random.default_rng(seed))
        for name, (relation, sides) in IDENTITIES.items():
            lhs, rhs = sides(h)
            scale = np.maximum(1.0, np.abs(rhs))
            if relation == "==":
                assert (np.abs(lhs - rhs) <= 1e-12 * scale).all(), name
            else:
                assert (lhs >= rhs - 1e-12 * scale).all(), name

    def test_frobenius_bound_is_attained_by_skew_matrices(self):
        j = np.array([[0.0, -1.0], [1.0, 0.0]])
        lhs, rhs = IDENTITIES["Frobenius square >= 2σ2"][1](j[None])
        assert_allclose(lhs, rhs)

    def test_off_diagonal_bound_on_a_diagonal_matrix(self):
        h = np.diag([1.0, -1.0, 2.0, -2.0])[None]
        lhs, rhs = IDENTITIES["off-diagonal square >= 2σ2"][1](h)
        assert lhs[0] == 0.0
        assert rhs[0] < 0.0


class TestCheckAlgebraicIdentities:
    def test_report(self):
        report = check_algebraic_identities(samples=300, seed=4)
        assert report.check_id == "identities"
        assert report.status == CheckStatus.PASSED
        assert (report.field_label, report.domain_label) == ("-", "-")
        assert len(report.conclusions) == 3 * len(IDENTITIES)
        assert report.notes == "300 random trace-free matrices per size, seed 4"

    def test_deterministic(self):
        a = check_algebraic_identities(sizes=(4,), samples=100, seed=9)
        b = check_algebraic_identities(sizes=(4,), samples=100, seed=9)
        assert a == b

    def test_tolerance_too_tight_fails(self):
        report = check_algebraic_identities(sizes=(6,), samples=1000, seed=2, tol=-1.0)
        assert report.status == CheckStatus.FAILED
        assert report.red_flag
