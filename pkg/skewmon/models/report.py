"""Step report written after every ingested local state."""

from typing import List

from pydantic import BaseModel, Field

from .formula import Verdict3


class FormulaResult(BaseModel):
    formula_id: str
    verdict: Verdict3
    check_ms: float = Field(..., ge=0)


class StepReport(BaseModel):
    """One line of the report file."""

    step: int = Field(..., ge=1)
    proc: str
    state_index: int = Field(..., ge=0)
    locations: int = Field(..., ge=0)
    accepting: int = Field(..., ge=0)
    new_cgs: int = Field(..., ge=0)
    build_ms: float = Field(..., ge=0)
    check_ms: float = Field(..., ge=0)
    rss_mb: float = Field(0.0, ge=0)
    results: List[FormulaResult] = Field(default_factory=list)

    def verdict_of(self, formula_id: str) -> Verdict3:
        for result in self.results:
            if result.formula_id == formula_id:
                return result.verdict
        raise KeyError(formula_id)


class SweepRow(BaseModel):
    """Summary of one (n, epsilon) cell of a parameter sweep."""

    n: int = Field(..., ge=1)
    epsilon: int = Field(..., ge=0)
    steps: int = Field(..., ge=0)
    locations: int = Field(..., ge=0)
    accepting: int = Field(..., ge=0)
    avg_build_ms: float = Field(..., ge=0)
    avg_check_ms: float = Field(..., ge=0)
    peak_rss_mb: float = Field(..., ge=0)
