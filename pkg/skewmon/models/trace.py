"""Trace-level records: intervals, events, local states and wire records."""

from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Interval(BaseModel):
    """
    Closed global-time interval [lo, hi] in ticks.

    A derived definite interval may come out empty; it is kept as lo > hi
    rather than being normalised away.
    """

    model_config = ConfigDict(frozen=True)

    lo: int = Field(..., ge=0)
    hi: int = Field(..., ge=0)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    def contains(self, t: int) -> bool:
        return self.lo <= t <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


class Event(BaseModel):
    """One observed event of a process, bounded in global time by `interval`."""

    model_config = ConfigDict(frozen=True)

    proc: str
    index: int = Field(..., ge=0)
    local_ts: int = Field(..., ge=0)
    interval: Interval

    @model_validator(mode="after")
    def check_interval(self):
        if self.interval.is_empty:
            raise ValueError(f"event {self.proc}#{self.index} has an empty interval")
        return self


class LocalState(BaseModel):
    """The closed period a process spends between two adjacent events."""

    model_config = ConfigDict(frozen=True)

    proc: str
    index: int = Field(..., ge=0)
    le: Event
    he: Event
    atoms: Dict[str, bool] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_bounding_events(self):
        if self.le.proc != self.proc or self.he.proc != self.proc:
            raise ValueError("bounding events belong to another process")
        if self.le.index != self.index or self.he.index != self.index + 1:
            raise ValueError(
                f"state {self.proc}#{self.index} must span events "
                f"{self.index} and {self.index + 1}"
            )
        return self

    @property
    def label(self) -> str:
        return f"{self.proc}#{self.index}"


class TraceRecord(BaseModel):
    """
    One line of the trace file.

    `ts` and the optional `interval` are raw values (multiples of the quantum);
    `atoms` is the valuation of the state this event opens.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    proc: str = Field(..., min_length=1)
    index: int
    ts: int
    atoms: Dict[str, bool] = Field(default_factory=dict)
    interval: Optional[Tuple[int, int]] = None
