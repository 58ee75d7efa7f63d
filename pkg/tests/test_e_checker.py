"""Tests for the CTL checker, the two-automata verdict and the monitor loop."""

import random

import pytest

from skewmon.config import Settings
from skewmon.errors import DefinitionError, GraphError, MemoryLimitExceeded
from skewmon.models.formula import And, ClockCmp, Const, CtlFormula, Modality, Polarity, PredRef, Quantifier, Verdict3
from skewmon.services.checker import check, check_ctl, check_detailed
from skewmon.services.memory_limiter import enforce_limit
from skewmon.services.monitor import MonitorState, build_lattice
from skewmon.services.timed_automaton import build_ta, extend, unfold

from tests.fixtures import (
    GOLDEN_EPSILON,
    GOLDEN_TS,
    RandomInstance,
    conj_def,
    golden_records,
    named,
    random_formula,
    records_from_ts,
)

A_DEF = conj_def("a", ["P1", "P2"], "x")


def _ta(records, epsilon, defs=(A_DEF,)):
    return build_ta(build_lattice(records, defs, epsilon))


def _ctl(quantifier, modality, psi):
    return CtlFormula(quantifier=quantifier, modality=modality, psi=psi, cutoff=0)


def _feed(monitor, records):
    reports = []
    for record in records:
        reports.extend(monitor.feed(record))
    return reports


@pytest.fixture
def golden_graph():
    """TOP-extended unfolding of the worked example."""
    return unfold(extend(_ta(golden_records(), GOLDEN_EPSILON), Polarity.TOP))


class TestCheckCtl:

    def test_always_true(self, golden_graph):
        """A[] true holds on any graph."""
        assert check_ctl(golden_graph, _ctl(Quantifier.FORALL, Modality.ALWAYS, Const(True)))

    def test_unsatisfiable(self, golden_graph):
        """E<> false does not hold."""
        assert not check_ctl(golden_graph, _ctl(Quantifier.EXISTS, Modality.EVENTUALLY, Const(False)))

    def test_clock_reachability(self, golden_graph):
        """Every run ends at Loc_inf in the open-ended last class."""
        late = ClockCmp(">=", golden_graph.horizon)
        assert check_ctl(golden_graph, _ctl(Quantifier.EXISTS, Modality.EVENTUALLY, late))
        assert check_ctl(golden_graph, _ctl(Quantifier.FORALL, Modality.EVENTUALLY, late))

    def test_exists_always_needs_infinite_path(self, golden_graph):
        """E[] T<=13 fails: time diverges on every run."""
        assert not check_ctl(golden_graph, _ctl(Quantifier.EXISTS, Modality.ALWAYS, ClockCmp("<=", 13)))

    def test_top_and_bot_on_loc_inf(self, golden_graph):
        """Loc_inf forcing decides A<>(T<=15 && a) per polarity."""
        ctl = _ctl(Quantifier.FORALL, Modality.EVENTUALLY, And(ClockCmp("<=", 15), PredRef("a")))
        assert check_ctl(golden_graph, ctl, Polarity.TOP)
        assert not check_ctl(golden_graph, ctl, Polarity.BOT)

    def test_dead_end_detected(self, golden_graph):
        """A node without successors is rejected."""
        golden_graph.succ[golden_graph.initial] = []
        with pytest.raises(GraphError):
            check_ctl(golden_graph, _ctl(Quantifier.EXISTS, Modality.EVENTUALLY, Const(True)))


class TestCheck:

    def test_inconclusive_worked_example(self):
        """A<>[0,15] a with a nowhere: TOP holds, BOT fails, verdict inconclusive."""
        ta = _ta(golden_records(x=False), GOLDEN_EPSILON)
        verdict, v_top, v_bot = check_detailed(ta, named("A<>[0,15] a").formula)
        assert (verdict, v_top, v_bot) == (Verdict3.UNKNOWN, True, False)

    def test_observed_witness(self):
        """E<> a is TRUE once a labeled CGS is reachable inside the window."""
        atoms = {
            "P1": [{"x": i == 1} for i in range(4)],
            "P2": [{"x": i == 1} for i in range(5)],
        }
        ta = _ta(records_from_ts(GOLDEN_TS, atoms), GOLDEN_EPSILON)
        assert ta.locations[(1, 1)].labels == {"a"}
        assert check(ta, named("E<>[0,9] a").formula) is Verdict3.TOP

    def test_time_zero_falsifies(self):
        """A[][0,0] a fails when the initial CGS is unlabeled."""
        ta = _ta(golden_records(x=False), GOLDEN_EPSILON)
        assert check(ta, named("A[][0,0] a").formula) is Verdict3.BOT

    def test_undefined_predicate(self):
        """Names the automaton's lattice never defined are rejected, not read as false."""
        ta = _ta(golden_records(x=False), GOLDEN_EPSILON)
        with pytest.raises(DefinitionError):
            check(ta, named("E<>[0,15] zz").formula)
        with pytest.raises(DefinitionError):
            check(_ta(golden_records(), GOLDEN_EPSILON, defs=()), named("E<>[0,15] a").formula)

    def test_compression_is_exact(self):
        """Compressed and tick-level unfoldings give the same verdicts."""
        rng = random.Random(77)
        for _ in range(120):
            inst = RandomInstance(rng)
            ta = build_ta(build_lattice(inst.records, inst.defs, inst.epsilon))
            formula = random_formula(rng)
            assert check(ta, formula, compress=True) is check(ta, formula, compress=False)


class TestMonitor:

    def test_first_step_inconclusive(self):
        """The step that creates C_00 reports inconclusive."""
        with MonitorState([named("A<>[0,15] a")], [A_DEF], GOLDEN_EPSILON) as m:
            reports = _feed(m, golden_records())
        first = [r for r in reports if r.locations > 0][0]
        assert first.locations == 1
        assert first.verdict_of("PHI_1") is Verdict3.UNKNOWN

    def test_unknown_before_initial_cgs(self):
        """Steps before any CGS exists are inconclusive."""
        with MonitorState([named("A<>[0,15] a")], [A_DEF], GOLDEN_EPSILON) as m:
            reports = _feed(m, golden_records())
        assert reports[0].locations == 0
        assert reports[0].verdict_of("PHI_1") is Verdict3.UNKNOWN

    def test_becomes_true_and_stays(self):
        """Once every run meets a inside the window, the verdict is TRUE for good."""
        stamps = {"P1": [0, 10, 20, 30, 40], "P2": [0, 10, 20, 30, 40]}
        atoms = {p: [{"x": i > 0} for i in range(5)] for p in stamps}
        with MonitorState([named("A<>[0,25] a")], [A_DEF], 1) as m:
            reports = _feed(m, records_from_ts(stamps, atoms))
        verdicts = [r.verdict_of("PHI_1") for r in reports]
        assert verdicts[-1] is Verdict3.TOP
        first = verdicts.index(Verdict3.TOP)
        assert all(v is Verdict3.TOP for v in verdicts[first:])

    def test_becomes_false_after_window(self):
        """With a never observed, the verdict turns FALSE once the window has passed."""
        stamps = {"P1": [0, 3, 6, 9, 12], "P2": [0, 3, 6, 9, 12]}
        with MonitorState([named("A<>[0,5] a")], [A_DEF], 1) as m:
            reports = _feed(m, records_from_ts(stamps))
        verdicts = [r.verdict_of("PHI_1") for r in reports]
        assert verdicts[-1] is Verdict3.BOT
        first = verdicts.index(Verdict3.BOT)
        assert all(v is Verdict3.BOT for v in verdicts[first:])

    def test_one_report_per_state(self):
        """Report count equals the number of closed states."""
        with MonitorState([named("A<>[0,15] a")], [A_DEF], GOLDEN_EPSILON) as m:
            reports = _feed(m, golden_records())
        assert len(reports) == sum(len(ts) - 1 for ts in GOLDEN_TS.values())
        assert [r.step for r in reports] == list(range(1, len(reports) + 1))
        assert reports[-1].locations == 8
        assert reports[-1].accepting == 3

    def test_parallel_workers_agree(self):
        """Fanning formulas out to workers does not change verdicts."""
        formulas = [named(t, f"F{i}") for i, t in enumerate(
            ["A<>[0,15] a", "E<>[0,15] a", "A[][0,3] !a", "E[][2,9] a || !a"])]
        serial = MonitorState(formulas, [A_DEF], GOLDEN_EPSILON)
        parallel = MonitorState(formulas, [A_DEF], GOLDEN_EPSILON,
                                settings=Settings(check_workers=4))
        with serial, parallel:
            a = [[x.verdict for x in r.results] for r in _feed(serial, golden_records())]
            b = [[x.verdict for x in r.results] for r in _feed(parallel, golden_records())]
        assert a == b

    def test_undefined_predicate(self):
        """Formulas over undeclared predicates are rejected up front."""
        with pytest.raises(DefinitionError):
            MonitorState([named("A<>[0,15] zz")], [A_DEF])

    def test_deterministic(self):
        """Same trace and formula give the same verdict sequence."""
        runs = []
        for _ in range(2):
            with MonitorState([named("A<>[0,15] a")], [A_DEF], GOLDEN_EPSILON) as m:
                runs.append([r.verdict_of("PHI_1") for r in _feed(m, golden_records())])
        assert runs[0] == runs[1]


class TestMemoryLimiter:

    def test_reports_resident_memory(self):
        """Every step carries a positive RSS sample."""
        with MonitorState([named("A<>[0,15] a")], [A_DEF], GOLDEN_EPSILON) as m:
            reports = _feed(m, golden_records())
        assert all(r.rss_mb > 0 for r in reports)

    def test_limit_exceeded(self):
        """A ceiling below the current footprint aborts the step."""
        with MonitorState([named("A<>[0,15] a")], [A_DEF], GOLDEN_EPSILON, memory_limit_mb=1) as m:
            with pytest.raises(MemoryLimitExceeded):
                _feed(m, golden_records())

    def test_given_sample(self):
        """A pre-sampled value is checked as is."""
        assert enforce_limit(100, current_mb=40.0) == 40.0
        assert enforce_limit(None, current_mb=4000.0) == 4000.0
        with pytest.raises(MemoryLimitExceeded):
            enforce_limit(100, current_mb=150.0)
