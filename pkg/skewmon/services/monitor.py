"""Online monitoring loop: one verdict per formula after every closed state."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence

from ..config import Settings
from ..errors import DefinitionError
from ..models.formula import NamedFormula, Verdict3
from ..models.lattice import PredicateDef
from ..models.report import FormulaResult, StepReport, SweepRow
from ..models.simulation import SimConfig
from ..models.trace import LocalState, TraceRecord
from .checker import check
from .lattice import LatticeStore, advance
from .memory_limiter import enforce_limit
from .simulator import generate_trace, process_names
from .spec_logic import pred_names
from .stream_registry import StreamRegistry
from .timed_automaton import TimedAutomatonView, build_ta

logger = logging.getLogger(__name__)


class MonitorState:
    """
    Everything the monitor carries between steps.

    The lattice and the base automaton only grow; the Loc_inf extensions
    are rebuilt per formula on every step.
    """

    def __init__(
        self,
        formulas: Sequence[NamedFormula],
        defs: Sequence[PredicateDef] = (),
        epsilon: int = 0,
        unit: int = 1,
        processes: Sequence[str] = (),
        settings: Optional[Settings] = None,
        memory_limit_mb: Optional[float] = None,
        compress: bool = True,
    ):
        self.settings = settings or Settings(unit=unit)
        known = {d.name for d in defs}
        for named in formulas:
            missing = pred_names(named.formula.phi) - known
            if missing:
                raise DefinitionError(
                    f"{named.name} uses undefined predicate(s): {', '.join(sorted(missing))}"
                )
        self.formulas = list(formulas)
        self.registry = StreamRegistry(epsilon, unit)
        self.store = LatticeStore(processes, defs)
        self.ta: Optional[TimedAutomatonView] = None
        self.verdicts: Dict[str, Verdict3] = {f.name: Verdict3.UNKNOWN for f in self.formulas}
        self.steps = 0
        self.memory_limit_mb = memory_limit_mb
        self.compress = compress
        self._pool = None
        if self.settings.check_workers > 1 and len(self.formulas) > 1:
            self._pool = ThreadPoolExecutor(max_workers=self.settings.check_workers)

    def feed(self, record: TraceRecord) -> List[StepReport]:
        """Ingest one trace record; returns a report for each state it closed."""
        self.store.ensure_process(record.proc)
        self.registry.submit(record)
        return [monitor_step(self, state) for state in self.registry.drain()]

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def _check_one(m: MonitorState, named: NamedFormula) -> FormulaResult:
    start = time.perf_counter()
    verdict = check(m.ta, named.formula, m.compress, m.settings.max_predicate_leaves)
    return FormulaResult(
        formula_id=named.name,
        verdict=verdict,
        check_ms=(time.perf_counter() - start) * 1000,
    )


def monitor_step(m: MonitorState, s_new: LocalState) -> StepReport:
    """
    Advance the lattice with one closed state and re-check every formula.

    Returns:
        StepReport with verdicts in formula order
    """
    m.steps += 1
    start = time.perf_counter()
    added = advance(m.store, s_new)
    if m.store.initial is not None:
        m.ta = build_ta(m.store, m.ta)
    build_ms = (time.perf_counter() - start) * 1000

    start = time.perf_counter()
    if m.ta is None:
        results = [FormulaResult(formula_id=f.name, verdict=Verdict3.UNKNOWN, check_ms=0.0)
                   for f in m.formulas]
    elif m._pool is not None:
        results = list(m._pool.map(lambda f: _check_one(m, f), m.formulas))
    else:
        results = [_check_one(m, f) for f in m.formulas]
    check_ms = (time.perf_counter() - start) * 1000

    for result in results:
        previous = m.verdicts[result.formula_id]
        if result.verdict is not previous:
            logger.info("%s changed %s -> %s after %s",
                        result.formula_id, previous.value, result.verdict.value, s_new.label)
        m.verdicts[result.formula_id] = result.verdict

    rss = enforce_limit(m.memory_limit_mb)
    report = StepReport(
        step=m.steps,
        proc=s_new.proc,
        state_index=s_new.index,
        locations=len(m.ta) if m.ta is not None else 0,
        accepting=len(m.ta.accepting) if m.ta is not None else 0,
        new_cgs=len(added),
        build_ms=build_ms,
        check_ms=check_ms,
        rss_mb=rss,
        results=results,
    )
    logger.debug("step %d: |Loc|=%d accepting=%d", report.step, report.locations, report.accepting)
    return report


def build_lattice(
    records: Iterable[TraceRecord],
    defs: Sequence[PredicateDef] = (),
    epsilon: int = 0,
    unit: int = 1,
    processes: Sequence[str] = (),
) -> LatticeStore:
    """
    Ingest a whole trace into a lattice without checking anything.

    Without an explicit process list every process of the trace is declared
    up front, in order of first appearance, so the initial global state
    always spans all of them.
    """
    records = list(records)
    if not processes:
        processes = list(dict.fromkeys(record.proc for record in records))
    registry = StreamRegistry(epsilon, unit)
    store = LatticeStore(processes, defs)
    for record in records:
        store.ensure_process(record.proc)
        registry.submit(record)
        for state in registry.drain():
            advance(store, state)
    return store


def run_sweep(
    ns: Sequence[int],
    epsilons: Sequence[int],
    duration: int,
    seed: int = 0,
    unit: int = 1,
    formulas: Sequence[NamedFormula] = (),
    defs: Sequence[PredicateDef] = (),
    settings: Optional[Settings] = None,
) -> List[SweepRow]:
    """
    Monitor one simulated trace per n under every epsilon.

    Per-process traces do not depend on n, so rows for larger n extend the
    same processes with more peers.
    """
    rows = []
    for n in ns:
        records = generate_trace(SimConfig(n=n, duration=duration, seed=seed, unit=unit))
        for epsilon in epsilons:
            reports: List[StepReport] = []
            with MonitorState(formulas, defs, epsilon, unit, process_names(n), settings) as m:
                for record in records:
                    reports.extend(m.feed(record))
            steps = max(len(reports), 1)
            rows.append(SweepRow(
                n=n,
                epsilon=epsilon,
                steps=len(reports),
                locations=reports[-1].locations if reports else 0,
                accepting=reports[-1].accepting if reports else 0,
                avg_build_ms=sum(r.build_ms for r in reports) / steps,
                avg_check_ms=sum(r.check_ms for r in reports) / steps,
                peak_rss_mb=max((r.rss_mb for r in reports), default=0.0),
            ))
            logger.info("sweep n=%d eps=%d: |Loc|=%d", n, epsilon, rows[-1].locations)
    return rows
