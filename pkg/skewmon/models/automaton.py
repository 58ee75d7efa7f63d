"""Timed-automaton records built from the lattice."""

from typing import FrozenSet, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .lattice import Coords, cgs_name
from .trace import Interval


class Location(BaseModel):
    """
    One location per CGS.

    invariant is the dwell bound `T <= I_pos.hi`; guard is the entry bound
    `T >= I_pos.lo` carried by every transition into this location.
    state_def_hi[k] is I_def(C[k]).hi, the earliest time process k has
    definitely left its state.
    """

    model_config = ConfigDict(frozen=True)

    coords: Coords
    invariant: int = Field(..., ge=0)
    guard: int = Field(..., ge=0)
    i_def: Interval
    labels: FrozenSet[str] = Field(default_factory=frozenset)
    state_def_hi: Tuple[int, ...]

    @property
    def name(self) -> str:
        return cgs_name(self.coords)


class Transition(BaseModel):
    model_config = ConfigDict(frozen=True)

    src: Coords
    dst: Coords
    guard: int = Field(..., ge=0)
