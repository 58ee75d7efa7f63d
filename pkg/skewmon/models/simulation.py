"""Simulator configuration."""

from typing import List, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SimConfig(BaseModel):
    """
    Synthetic trace parameters, all times in raw units (ms).

    GENERIC traces alternate idle/active phases with exponential lengths;
    GATHERING traces drive one `at_assembly` atom per process that turns
    true at the process's assembly time and stays true.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=1)
    epsilon: int = Field(
        0, ge=0, description="Not applied to timestamps; pass the same value to check --epsilon"
    )
    seed: int = 0
    duration: int = Field(..., ge=0)
    sample_period: int = Field(1000, gt=0)
    mean_active: int = Field(10000, gt=0)
    mean_idle: int = Field(5000, gt=0)
    unit: int = Field(1, ge=1)
    profile: Literal["generic", "gathering"] = "generic"
    assembly: List[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_profile(self):
        if self.profile == "gathering" and len(self.assembly) != self.n:
            raise ValueError(
                f"gathering profile needs {self.n} assembly times, got {len(self.assembly)}"
            )
        if any(t < 0 for t in self.assembly):
            raise ValueError("assembly times must be non-negative")
        timed = [self.epsilon, self.duration, self.sample_period,
                 self.mean_active, self.mean_idle, *self.assembly]
        if any(value % self.unit for value in timed):
            raise ValueError(f"all times must be multiples of the unit {self.unit}")
        return self
