"""Property AST and verdict types.

State predicates are small immutable trees; equal trees hash equal, which the
evaluator relies on for caching.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .trace import Interval


class Quantifier(str, Enum):
    EXISTS = "E"
    FORALL = "A"


class Modality(str, Enum):
    EVENTUALLY = "<>"
    ALWAYS = "[]"


class Polarity(str, Enum):
    """Which optimistic/pessimistic future the Loc_inf sink stands for."""

    TOP = "top"
    BOT = "bot"
    NONE = "none"


class Verdict3(str, Enum):
    """Three-valued monitoring verdict."""

    TOP = "TRUE"
    BOT = "FALSE"
    UNKNOWN = "INCONCLUSIVE"

    @property
    def symbol(self) -> str:
        return {"TRUE": "⊤", "FALSE": "⊥", "INCONCLUSIVE": "?"}[self.value]


CLOCK_OPS = ("<=", ">=", "==", "<", ">")


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class PredRef:
    """Reference to a CGS predicate name (an element of AP)."""

    name: str


@dataclass(frozen=True)
class AtomRef:
    """Per-process atom, only valid inside predicate definitions."""

    proc: str
    atom: str


@dataclass(frozen=True)
class ClockCmp:
    """Clock constraint `T op bound`, bound in ticks."""

    op: str
    bound: int

    def __post_init__(self):
        if self.op not in CLOCK_OPS:
            raise ValueError(f"unknown clock operator {self.op!r}")
        if self.bound < 0:
            raise ValueError("clock bound must be non-negative")


@dataclass(frozen=True)
class Not:
    arg: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Implies:
    left: "Expr"
    right: "Expr"


Expr = Union[Const, PredRef, AtomRef, ClockCmp, Not, And, Or, Implies]


class Formula(BaseModel):
    """`Q M^J phi` with no nested modality."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    quantifier: Quantifier
    modality: Modality
    window: Interval
    phi: Expr

    @model_validator(mode="after")
    def check_window(self):
        if self.window.is_empty:
            raise ValueError(f"time window {self.window} is empty")
        return self


class CtlFormula(BaseModel):
    """Formula with the time window folded into its state predicate."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    quantifier: Quantifier
    modality: Modality
    psi: Expr
    cutoff: int = Field(..., ge=0, description="Window upper bound; psi is constant beyond it")


class NamedFormula(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    text: str
    formula: Formula
