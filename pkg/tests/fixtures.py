"""Shared trace builders for the test suites."""

import random
from typing import Dict, List, Optional, Sequence, Tuple

from skewmon.models.formula import (
    And,
    Expr,
    Formula,
    Modality,
    NamedFormula,
    Not,
    Or,
    PredRef,
    Quantifier,
)
from skewmon.models.lattice import PredicateDef
from skewmon.models.trace import Interval, TraceRecord
from skewmon.services.spec_logic import parse_definition, parse_formula

# Worked two-process example, epsilon = 1:
#   P1 events [0,1] [4,6] [11,13] [15,17]
#   P2 events [0,1] [3,5] [7,9] [10,12] [12,14]
GOLDEN_TS = {"P1": [0, 5, 12, 16], "P2": [0, 4, 8, 11, 13]}
GOLDEN_EPSILON = 1


def interleave(per_proc: Dict[str, List[TraceRecord]]) -> List[TraceRecord]:
    order = {proc: k for k, proc in enumerate(per_proc)}
    records = [r for rs in per_proc.values() for r in rs]
    return sorted(records, key=lambda r: (r.ts, order[r.proc], r.index))


def records_from_ts(
    timestamps: Dict[str, List[int]],
    atoms: Optional[Dict[str, List[Dict[str, bool]]]] = None,
) -> List[TraceRecord]:
    per_proc = {}
    for proc, stamps in timestamps.items():
        valuations = (atoms or {}).get(proc) or [{"x": False}] * len(stamps)
        per_proc[proc] = [
            TraceRecord(proc=proc, index=i, ts=ts, atoms=valuations[i])
            for i, ts in enumerate(stamps)
        ]
    return interleave(per_proc)


def golden_records(x: bool = False) -> List[TraceRecord]:
    """The worked example; every state carries atom x with the given value."""
    atoms = {proc: [{"x": x}] * len(ts) for proc, ts in GOLDEN_TS.items()}
    return records_from_ts(GOLDEN_TS, atoms)


def conj_def(name: str, procs: Sequence[str], atom: str) -> PredicateDef:
    text = " && ".join(f"{p}.{atom}" for p in procs)
    return PredicateDef(name=name, expr=parse_definition(text))


def disj_def(name: str, procs: Sequence[str], atom: str) -> PredicateDef:
    text = " || ".join(f"{p}.{atom}" for p in procs)
    return PredicateDef(name=name, expr=parse_definition(text))


def named(text: str, name: str = "PHI_1", unit: int = 1) -> NamedFormula:
    return NamedFormula(name=name, text=text, formula=parse_formula(text, unit))


class RandomInstance:
    """Small random trace with predicates a (conjunction of x) and b (disjunction of y)."""

    def __init__(self, rng: random.Random, max_procs: int = 3, max_states: int = 4):
        self.n = rng.randint(1, max_procs)
        self.epsilon = rng.choice([0, 1, 2])
        self.procs = [f"P{k}" for k in range(1, self.n + 1)]
        per_proc = {}
        for proc in self.procs:
            count = rng.randint(1, max_states) + 1
            ts = 0
            records = []
            for i in range(count):
                atoms = {"x": rng.random() < 0.5, "y": rng.random() < 0.4}
                records.append(TraceRecord(proc=proc, index=i, ts=ts, atoms=atoms))
                ts += rng.randint(1, 4)
            per_proc[proc] = records
        self.records = interleave(per_proc)
        self.defs = [conj_def("a", self.procs, "x"), disj_def("b", self.procs, "y")]


def random_phi(rng: random.Random, depth: int = 2) -> Expr:
    if depth == 0 or rng.random() < 0.35:
        leaf: Expr = PredRef(rng.choice(["a", "b"]))
        return Not(leaf) if rng.random() < 0.25 else leaf
    kind = rng.choice(["and", "or", "not"])
    if kind == "not":
        return Not(random_phi(rng, depth - 1))
    node = And if kind == "and" else Or
    return node(random_phi(rng, depth - 1), random_phi(rng, depth - 1))


def random_formula(
    rng: random.Random,
    quantifier: Optional[Quantifier] = None,
    modality: Optional[Modality] = None,
) -> Formula:
    lo = rng.randint(0, 20)
    hi = rng.randint(lo, 24)
    return Formula(
        quantifier=quantifier or rng.choice(list(Quantifier)),
        modality=modality or rng.choice(list(Modality)),
        window=Interval(lo=lo, hi=hi),
        phi=random_phi(rng),
    )


def dual(formula: Formula) -> Tuple[Formula, Formula]:
    """(E[] phi, A<> !phi) or (A[] phi, E<> !phi) sharing window and phi."""
    flipped = {Quantifier.EXISTS: Quantifier.FORALL, Quantifier.FORALL: Quantifier.EXISTS}
    always = formula.model_copy(update={"modality": Modality.ALWAYS})
    eventually = Formula(
        quantifier=flipped[formula.quantifier],
        modality=Modality.EVENTUALLY,
        window=formula.window,
        phi=Not(formula.phi),
    )
    return always, eventually
