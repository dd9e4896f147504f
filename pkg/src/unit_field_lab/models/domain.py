from __future__ import annotations

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class CustomDomainSpec(BaseModel):
    """Contents of a custom domain file."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    label: str = "custom"
    params: List[str] = Field(min_length=3)
    lo: List[float]
    hi: List[float]
    periodic: List[int] = Field(default_factory=list)
    # one expression per ambient coordinate, in the parameter names
    chart: List[str] = Field(min_length=4)
    # the face u_b = hi[b] is the boundary; absent for closed domains
    boundary_axis: Optional[int] = None

    @model_validator(mode="after")
    def _check_shapes(self) -> "CustomDomainSpec":
        d = len(self.params)
        if len(set(self.params)) != d:
            raise ValueError(f"Duplicate parameter names in {self.params}")
        if len(self.lo) != d or len(self.hi) != d:
            raise ValueError(f"lo and hi need {d} entries, got {len(self.lo)} and {len(self.hi)}")
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"Every lo must be below hi, got lo={self.lo} hi={self.hi}")
        if len(self.chart) != d + 1:
            raise ValueError(f"{d} parameters chart a {d}-sphere, which needs {d + 1} chart lines, got {len(self.chart)}")
        if any(not 0 <= axis < d for axis in self.periodic):
            raise ValueError(f"periodic axes must lie in [0, {d}), got {self.periodic}")
        if self.boundary_axis is not None:
            if not 0 <= self.boundary_axis < d:
                raise ValueError(f"boundary_axis must lie in [0, {d}), got {self.boundary_axis}")
            if self.boundary_axis in self.periodic:
                raise ValueError(f"boundary_axis {self.boundary_axis} cannot be periodic")
        return self
