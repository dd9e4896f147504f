from unit_field_lab.domains.catalog import (  # noqa: F401
    CLIFFORD_DELTA,
    complement_torus,
    domain_names,
    full_sphere,
    resolve_domain,
    solid_torus,
)
from unit_field_lab.domains.custom import custom_domain, custom_domain_from_file, custom_domain_from_lines  # noqa: F401
from unit_field_lab.domains.quadrature import (  # noqa: F401
    Estimate,
    boundary_nodes,
    domain_volume,
    estimate,
    integrate,
    integrate_boundary,
    monte_carlo_estimate,
    monte_carlo_sphere,
    tensor_grid,
)
from unit_field_lab.domains.schema import BoundaryPatch, Domain, MonteCarloSphere  # noqa: F401
from unit_field_lab.domains.validation import validate_domain  # noqa: F401
