from unit_field_lab.models.domain import CustomDomainSpec  # noqa: F401
from unit_field_lab.models.quadrature import MilnorMapConfig, QuadratureSpec  # noqa: F401
from unit_field_lab.models.report import (  # noqa: F401
    CheckStatus,
    Condition,
    FunctionalResult,
    Relation,
    RunReport,
    VerificationReport,
)
from unit_field_lab.models.run_config import RunConfig  # noqa: F401
