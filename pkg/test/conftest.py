import math

import numpy as np
import pytest

from unit_field_lab.domains import complement_torus, full_sphere, solid_torus
from unit_field_lab.fields import hopf, lambda_field
from unit_field_lab.geometry import SphereDim
from unit_field_lab.models import QuadratureSpec

PI2 = math.pi**2

# v_λ and H are invariant under the two circle actions, so the periodic axes need few nodes
FAST_NODES = [8, 8, 48]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def q_fast():
    return QuadratureSpec(nodes_per_axis=FAST_NODES)


@pytest.fixture
def q_sphere():
    return QuadratureSpec(nodes_per_axis=[8, 8, 32])


@pytest.fixture
def hopf1():
    return hopf(SphereDim(1))


@pytest.fixture
def hopf2():
    return hopf(SphereDim(2))


@pytest.fixture(params=[1.0, 2.0, 4.0], ids=lambda lam: f"lambda={lam:g}")
def v_lambda(request):
    return lambda_field(request.param)


@pytest.fixture
def clifford_k():
    return solid_torus()


@pytest.fixture
def clifford_kc():
    return complement_torus()


@pytest.fixture
def s3():
    return full_sphere(SphereDim(1))


# smooth, nowhere-vanishing, with a nonzero flux through the Clifford torus
TILTED_HOPF = ["-x2 + 0.5*x1", "x1 + 0.5*x2", "-x4 - 0.5*x3", "x3 - 0.5*x4"]

# zero only on the circle x1 = x2 = 0, so smooth on K^c; at (e1+e3)/√2 the shape
# operator has the real eigenvalues -√2 and -1/√2 and det(dφ_1) < 0
SADDLE = ["-x2", "x1", "2*x3 - x4", "x3 - 2*x4"]

# nowhere zero on S³ and invariant under neither circle action
ASYMMETRIC = ["-x2 + 0.2*x3", "x1", "-x4", "x3 + 0.2*x1*x2"]
