from unit_field_lab.fields.catalog import (  # noqa: F401
    custom_field,
    custom_field_from_file,
    field_names,
    hopf,
    is_hopf,
    lambda_field,
    resolve_field,
)
from unit_field_lab.fields.derivative import (  # noqa: F401
    boundary_mismatch,
    covariant_derivative,
    divergence,
    validate_field,
)
from unit_field_lab.fields.schema import FieldDefinition  # noqa: F401
