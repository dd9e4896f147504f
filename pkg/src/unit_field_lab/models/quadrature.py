from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveInt

from unit_field_lab.constants import DEFAULT_NODES, DEFAULT_SEED

Rule = Literal["periodic", "gauss-legendre"]


class QuadratureSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    nodes_per_axis: List[PositiveInt] = Field(default_factory=lambda: list(DEFAULT_NODES))
    # None: derived from the domain's periodic axes
    rule_per_axis: Optional[List[Rule]] = None
    mc_samples: Optional[PositiveInt] = None
    rng_seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)


class MilnorMapConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    # t = 0 is admitted as the identity map
    t: NonNegativeFloat
