"""Lattice-level records: consistent global states and predicate definitions."""

from typing import FrozenSet, Tuple

from pydantic import BaseModel, ConfigDict, Field

from .formula import Expr
from .trace import Interval

Coords = Tuple[int, ...]


class Cgs(BaseModel):
    """A consistent global state with its time intervals and predicate labels."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coords: Coords
    i_def: Interval
    i_pos: Interval
    labels: FrozenSet[str] = Field(default_factory=frozenset)

    @property
    def name(self) -> str:
        return cgs_name(self.coords)


class PredicateDef(BaseModel):
    """A named CGS predicate over per-process atoms, e.g. `a := P1.x && P2.x`."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(..., pattern=r"^[A-Za-z_][A-Za-z0-9_]*$")
    expr: Expr


def cgs_name(coords: Coords) -> str:
    """Render coordinates the way lattice figures do: C_11, or C_1_12 with wide indices."""
    if all(c < 10 for c in coords):
        return "C_" + "".join(str(c) for c in coords)
    return "C_" + "_".join(str(c) for c in coords)
