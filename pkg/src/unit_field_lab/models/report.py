from __future__ import annotations

import math
from enum import Enum
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from unit_field_lab.constants import SCHEMA_VERSION
from unit_field_lab.models.quadrature import QuadratureSpec

FunctionalName = Literal[
    "volume",
    "energy",
    "pushforward_volume",
    "flux",
    "sigma1_integral",
    "sigma2_integral",
    "domain_volume",
]


class FunctionalResult(BaseModel):
    name: FunctionalName
    value: float
    # Monte Carlo standard error; 0 for tensor-product quadrature
    stderr: float = 0.0
    domain_label: str
    field_label: str
    t: Optional[float] = None
    status: Literal["ok", "not_a_diffeomorphism"] = "ok"
    min_jacobian: Optional[float] = None
    method: Literal["tensor", "monte_carlo"] = "tensor"
    nodes: int
    quadrature: QuadratureSpec

    @field_validator("value")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"Functional value must be finite, got {value}")
        return value


class CheckStatus(str, Enum):
    PASSED = "passed"
    # conclusion failed although every hypothesis held: red flag
    FAILED = "failed"
    HYPOTHESES_NOT_MET = "hypotheses not met"


class Condition(BaseModel):
    description: str
    value: float
    tolerance: float
    passed: bool


class Relation(BaseModel):
    description: str
    lhs: float
    rhs: float
    relation: Literal[">=", "=="]
    tolerance: float
    passed: bool

    @property
    def margin(self) -> float:
        if self.relation == ">=":
            return self.lhs - self.rhs
        return -abs(self.lhs - self.rhs)

    @classmethod
    def at_least(cls, description: str, lhs: float, rhs: float, tolerance: float) -> "Relation":
        return cls(
            description=description, lhs=lhs, rhs=rhs, relation=">=", tolerance=tolerance,
            passed=lhs >= rhs - tolerance,
        )

    @classmethod
    def equal(cls, description: str, lhs: float, rhs: float, tolerance: float) -> "Relation":
        return cls(
            description=description, lhs=lhs, rhs=rhs, relation="==", tolerance=tolerance,
            passed=abs(lhs - rhs) <= tolerance,
        )


class VerificationReport(BaseModel):
    check_id: str
    field_label: str
    domain_label: str
    # Milnor parameters the check was evaluated at, empty when t plays no role
    t_values: List[float] = Field(default_factory=list)
    status: CheckStatus
    hypotheses: List[Condition] = Field(default_factory=list)
    conclusions: List[Relation] = Field(default_factory=list)
    chain: List[Relation] = Field(default_factory=list)
    functionals: List[FunctionalResult] = Field(default_factory=list)
    notes: str = ""

    @property
    def hypotheses_passed(self) -> bool:
        return all(h.passed for h in self.hypotheses)

    @property
    def red_flag(self) -> bool:
        return self.status == CheckStatus.FAILED


class RunReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    generated_at: str
    config: Dict[str, Any]
    reports: List[VerificationReport] = Field(default_factory=list)
    functionals: List[FunctionalResult] = Field(default_factory=list)
