"""The growing lattice of consistent global states (CGSs).

A CGS picks one closed local state per process such that no two of them are
ordered by definitely-before. The store keeps every CGS discovered so far,
the +1-coordinate edges between them, and an index by per-process coordinate
that makes the active surface (CGSs touching the newest state of some
process) a dictionary lookup.
"""

import logging
from collections import defaultdict, deque
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from ..errors import SequenceError, TraceValidityError
from ..models.lattice import Cgs, Coords, PredicateDef
from ..models.trace import Interval, LocalState
from .spec_logic import eval_definition
from .trace_model import definitely_before_states, state_intervals

logger = logging.getLogger(__name__)


def cgs_consistent(states: Sequence[LocalState]) -> bool:
    """True iff the states are pairwise concurrent."""
    for i, first in enumerate(states):
        for second in states[i + 1:]:
            if definitely_before_states(first, second) or definitely_before_states(second, first):
                return False
    return True


def cgs_intervals(states: Sequence[LocalState]) -> Tuple[Interval, Interval]:
    """
    Intersect the constituent states' intervals.

    Returns:
        (I_def, I_pos); I_def may be empty
    """
    defs, poss = zip(*(state_intervals(s) for s in states))
    i_def = Interval(lo=max(i.lo for i in defs), hi=min(i.hi for i in defs))
    i_pos = Interval(lo=max(i.lo for i in poss), hi=min(i.hi for i in poss))
    return i_def, i_pos


def label_cgs(states: Sequence[LocalState], defs: Iterable[PredicateDef]) -> FrozenSet[str]:
    """Names of the predicate definitions that hold on the constituent states."""
    atoms = {s.proc: s.atoms for s in states}
    return frozenset(d.name for d in defs if eval_definition(d.expr, atoms))


class LatticeStore:
    """
    Discovered CGSs of the observed trace.

    Processes are fixed once the initial CGS exists; until then a new
    process may still join (its index is its order of appearance).
    """

    def __init__(self, processes: Sequence[str] = (), defs: Sequence[PredicateDef] = ()):
        self.processes: List[str] = []
        self._proc_index: Dict[str, int] = {}
        self.states: List[List[LocalState]] = []
        self.defs: Tuple[PredicateDef, ...] = tuple(defs)
        self.cgs: Dict[Coords, Cgs] = {}
        self.order: List[Coords] = []
        self.successors: Dict[Coords, List[Coords]] = defaultdict(list)
        self.predecessors: Dict[Coords, List[Coords]] = defaultdict(list)
        self.by_coord: List[Dict[int, List[Coords]]] = []
        for proc in processes:
            self.ensure_process(proc)

    @property
    def n(self) -> int:
        return len(self.processes)

    @property
    def g_max(self) -> Coords:
        return tuple(len(states) - 1 for states in self.states)

    @property
    def initial(self) -> Optional[Coords]:
        origin = (0,) * self.n
        return origin if self.n and origin in self.cgs else None

    def __len__(self) -> int:
        return len(self.cgs)

    def ensure_process(self, proc: str) -> int:
        if proc in self._proc_index:
            return self._proc_index[proc]
        if self.cgs:
            raise TraceValidityError(
                f"process {proc} appeared after the initial global state was built"
            )
        self._proc_index[proc] = len(self.processes)
        self.processes.append(proc)
        self.states.append([])
        self.by_coord.append(defaultdict(list))
        return self._proc_index[proc]

    def states_at(self, coords: Coords) -> List[LocalState]:
        return [self.states[k][i] for k, i in enumerate(coords)]

    def consistent(self, coords: Coords) -> bool:
        return cgs_consistent(self.states_at(coords))

    def edges(self) -> Iterable[Tuple[Coords, Coords]]:
        for src in self.order:
            for dst in self.successors.get(src, ()):
                yield src, dst

    def _admit(self, coords: Coords) -> Cgs:
        states = self.states_at(coords)
        i_def, i_pos = cgs_intervals(states)
        if i_pos.is_empty:
            raise TraceValidityError(f"consistent global state {coords} has empty I_pos {i_pos}")
        cgs = Cgs(coords=coords, i_def=i_def, i_pos=i_pos, labels=label_cgs(states, self.defs))
        self.cgs[coords] = cgs
        self.order.append(coords)
        for k, idx in enumerate(coords):
            self.by_coord[k][idx].append(coords)
            if idx > 0:
                pred = coords[:k] + (idx - 1,) + coords[k + 1:]
                if pred in self.cgs:
                    self.successors[pred].append(coords)
                    self.predecessors[coords].append(pred)
        logger.debug("admitted %s I_def=%s I_pos=%s labels=%s",
                     cgs.name, i_def, i_pos, sorted(cgs.labels))
        return cgs


def _explore(store: LatticeStore, seeds: Iterable[Coords]) -> Set[Coords]:
    """Consistent coordinate vectors reachable from seeds by +1 moves within G_max."""
    g_max = store.g_max
    found: Set[Coords] = set()
    frontier = deque()
    for seed in seeds:
        if seed not in found:
            found.add(seed)
            frontier.append(seed)
    while frontier:
        coords = frontier.popleft()
        for k in range(store.n):
            if coords[k] >= g_max[k]:
                continue
            nxt = coords[:k] + (coords[k] + 1,) + coords[k + 1:]
            if nxt in found or nxt in store.cgs or not store.consistent(nxt):
                continue
            found.add(nxt)
            frontier.append(nxt)
    return found


def advance(store: LatticeStore, s_new: LocalState) -> List[Cgs]:
    """
    Add the next closed state of a process and grow the lattice.

    New CGSs all contain s_new, and each has a consistent predecessor that
    is either older or another new CGS, so a search seeded from the old
    CGSs with coordinate k at s_new.index - 1 finds them all.

    Args:
        store: Lattice to grow
        s_new: Next closed local state of its process

    Returns:
        New CGSs in topological order (by coordinate sum)

    Raises:
        SequenceError: s_new is not the next state of its process
        TraceValidityError: the initial global state is inconsistent
    """
    k = store.ensure_process(s_new.proc)
    expected = len(store.states[k])
    if s_new.index != expected:
        raise SequenceError(f"{s_new.proc}: expected state {expected}, got {s_new.index}")
    store.states[k].append(s_new)

    if any(not states for states in store.states):
        return []

    if store.initial is None:
        origin = (0,) * store.n
        if not store.consistent(origin):
            raise TraceValidityError("the initial global state is not consistent")
        found = _explore(store, [origin])
    else:
        m = s_new.index
        seeds = []
        for old in store.by_coord[k].get(m - 1, ()):
            candidate = old[:k] + (m,) + old[k + 1:]
            if store.consistent(candidate):
                seeds.append(candidate)
        found = _explore(store, seeds)

    added = [store._admit(coords) for coords in sorted(found, key=lambda c: (sum(c), c))]
    logger.debug("state %s added %d CGS(s), lattice size %d", s_new.label, len(added), len(store))
    return added


def active_surface(store: LatticeStore) -> List[Cgs]:
    """CGSs with at least one coordinate at that process's latest closed state."""
    if not store.cgs:
        return []
    found = set()
    for k, idx in enumerate(store.g_max):
        found.update(store.by_coord[k].get(idx, ()))
    return [store.cgs[c] for c in sorted(found)]
