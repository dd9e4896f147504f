from __future__ import annotations

from typing import Any, List, Literal, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    PositiveInt,
    field_validator,
)

from unit_field_lab.constants import DEFAULT_NODES, DEFAULT_SEED, DEFAULT_T_VALUES, HYPOTHESIS_TOL, MAX_K, N_JOBS
from unit_field_lab.models.quadrature import QuadratureSpec

Command = Literal["volume", "energy", "pushforward", "pvp", "flux", "verify", "sweep"]
SuiteName = Literal["1.3", "1.4", "1.6", "dichotomy", "identities", "all"]


def _as_list(value: Any) -> Any:
    if value is None or isinstance(value, (list, tuple)):
        return value
    if isinstance(value, str) and "," in value:
        return [item.strip() for item in value.split(",") if item.strip()]
    return [value]


class RunConfig(BaseModel):
    """Everything a run depends on; echoed verbatim into every report."""

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    command: Command
    field: str = "hopf"
    domain: str = "solid_torus"
    # Hopf sphere S^{2k+1}; v_λ and the torus domains need k = 1
    k: int = Field(default=1, ge=1, le=MAX_K)
    nodes: List[PositiveInt] = Field(default_factory=lambda: list(DEFAULT_NODES))
    mc_samples: Optional[PositiveInt] = None
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    t: List[NonNegativeFloat] = Field(default_factory=lambda: list(DEFAULT_T_VALUES))
    lambdas: List[float] = Field(default_factory=lambda: [1.0, 2.0, 4.0], alias="lambda")
    out_json: Optional[str] = None
    out_csv: Optional[str] = None
    suite: List[SuiteName] = Field(default_factory=lambda: ["all"])
    tolerance: PositiveFloat = HYPOTHESIS_TOL
    n_jobs: int = N_JOBS
    gram: Literal["full", "h_block"] = "full"

    @field_validator("nodes", "t", "lambdas", mode="before")
    @classmethod
    def _listify(cls, value: Any) -> Any:
        return _as_list(value)

    @field_validator("suite", mode="before")
    @classmethod
    def _suite_names(cls, value: Any) -> Any:
        # a config file reads `suite = 1.4` as a number
        return [item if isinstance(item, str) else f"{item:g}" for item in _as_list(value)]

    @field_validator("lambdas")
    @classmethod
    def _lambda_range(cls, values: List[float]) -> List[float]:
        bad = [v for v in values if not v >= 1.0]
        if bad:
            raise ValueError(f"lambda values must be >= 1, got {bad}")
        return values

    @field_validator("n_jobs")
    @classmethod
    def _jobs(cls, value: int) -> int:
        if value == 0 or value < -1:
            raise ValueError(f"n_jobs must be positive or -1, got {value}")
        return value

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(nodes_per_axis=list(self.nodes), mc_samples=self.mc_samples, rng_seed=self.seed)

    def echo(self) -> dict:
        return self.model_dump(mode="json", by_alias=True)
