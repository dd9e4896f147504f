from unit_field_lab.geometry.sphere import (  # noqa: F401
    AdaptedFrame,
    SphereDim,
    SpherePoint,
    TangentVector,
    complete_adapted_frame,
    complex_structure,
    geodesic,
    inner,
    project_tangent,
    random_orthogonal_basis,
    random_sphere_points,
    sphere_volume,
)
