"""Single-clock timed automaton of the lattice and its Loc_inf extensions.

Every CGS becomes a location with invariant T <= I_pos.hi; every lattice
edge becomes a transition guarded by T >= I_pos(dst).lo. The clock is never
reset. `extend` adds the Loc_inf sink reachable from the accepting (active
surface) locations, and `unfold` turns the extended automaton into a finite
discrete graph over clock classes for the CTL checker.
"""

import bisect
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from ..errors import GraphError, HorizonError, NotReadyError
from ..models.automaton import Location, Transition
from ..models.formula import Polarity
from ..models.lattice import Coords
from .lattice import LatticeStore, active_surface

logger = logging.getLogger(__name__)

LOC_INF = "inf"
EXPIRED = "expired"

LocKey = Union[Coords, str]


class TimedAutomatonView:
    """
    Locations and transitions built so far.

    Grows with the lattice: build_ta only appends the CGSs admitted since
    the previous call. The sorted list of clock constants (all invariants
    and guards, plus 0) is maintained alongside.
    """

    def __init__(self):
        self.locations: Dict[Coords, Location] = {}
        self.transitions: List[Transition] = []
        self.outgoing: Dict[Coords, List[Transition]] = defaultdict(list)
        self.initial: Optional[Coords] = None
        self.accepting: FrozenSet[Coords] = frozenset()
        self.g_max: Coords = ()
        self.defined: FrozenSet[str] = frozenset()
        self._admitted = 0
        self._constants: List[int] = [0]
        self._constant_set = {0}

    def __len__(self) -> int:
        return len(self.locations)

    def add_constant(self, value: int) -> None:
        if value not in self._constant_set:
            self._constant_set.add(value)
            bisect.insort(self._constants, value)

    @property
    def max_constant(self) -> int:
        return self._constants[-1]

    def constants_upto(self, top: int) -> List[int]:
        return self._constants[:bisect.bisect_right(self._constants, top)]


def build_ta(store: LatticeStore, ta: Optional[TimedAutomatonView] = None) -> TimedAutomatonView:
    """
    Build (or extend) the timed automaton of the lattice.

    Args:
        store: Lattice with an initial CGS
        ta: Automaton returned by a previous call on the same store

    Returns:
        The automaton, with accepting set = current active surface

    Raises:
        NotReadyError: No initial CGS yet
        GraphError: A transition guard decreases along an edge
    """
    if store.initial is None:
        raise NotReadyError("no consistent initial global state yet")
    if ta is None:
        ta = TimedAutomatonView()

    for coords in store.order[ta._admitted:]:
        cgs = store.cgs[coords]
        location = Location(
            coords=coords,
            invariant=cgs.i_pos.hi,
            guard=cgs.i_pos.lo,
            i_def=cgs.i_def,
            labels=cgs.labels,
            state_def_hi=tuple(s.he.interval.lo for s in store.states_at(coords)),
        )
        ta.locations[coords] = location
        ta.add_constant(location.invariant)
        ta.add_constant(location.guard)
        for pred in store.predecessors.get(coords, ()):
            if ta.locations[pred].guard > location.guard:
                raise GraphError(f"guard decreases on edge {ta.locations[pred].name} -> {location.name}")
            transition = Transition(src=pred, dst=coords, guard=location.guard)
            ta.transitions.append(transition)
            ta.outgoing[pred].append(transition)
    ta._admitted = len(store.order)

    ta.initial = store.initial
    ta.g_max = store.g_max
    ta.defined = frozenset(d.name for d in store.defs)
    ta.accepting = frozenset(c.coords for c in active_surface(store))
    return ta


@dataclass
class ExtendedTa:
    """Base automaton plus the Loc_inf sink for one polarity."""

    base: TimedAutomatonView
    polarity: Polarity
    inf_guards: Dict[Coords, int]
    entry_bounds: Dict[Coords, int] = field(default_factory=dict)

    def invariant(self, key: LocKey) -> Optional[int]:
        if key == LOC_INF:
            return None
        return self.base.locations[key].invariant


def inf_guard(location: Location, g_max: Coords) -> int:
    """
    Earliest clock value at which the observed prefix may end in `location`.

    The minimum, over processes sitting in their latest closed state, of the
    time that process has definitely left it, and never before the location
    can be entered.
    """
    bounds = [
        max(location.guard, location.state_def_hi[k])
        for k, idx in enumerate(location.coords)
        if idx == g_max[k]
    ]
    if not bounds:
        raise GraphError(f"{location.name} is not on the active surface")
    return min(bounds)


def extend(ta: TimedAutomatonView, polarity: Polarity, g_max: Optional[Coords] = None) -> ExtendedTa:
    """Add Loc_inf with one guarded edge from every accepting location."""
    if not ta.accepting:
        raise GraphError("the automaton has no accepting location")
    g_max = ta.g_max if g_max is None else g_max
    guards: Dict[Coords, int] = {}
    entry: Dict[Coords, int] = {}
    for coords in sorted(ta.accepting):
        location = ta.locations[coords]
        guard = inf_guard(location, g_max)
        bound = guard
        if not location.i_def.is_empty:
            bound = max(guard, location.i_def.hi)
        if bound != guard:
            logger.warning(
                "Loc_inf entry bound of %s raised from %d to I_def.hi %d",
                location.name, guard, bound,
            )
        guards[coords] = guard
        entry[coords] = bound
    return ExtendedTa(base=ta, polarity=polarity, inf_guards=guards, entry_bounds=entry)


@dataclass
class DiscreteGraph:
    """
    Finite graph of (location, clock class) nodes.

    Clock classes are closed tick ranges on which every constraint of the
    instance has a constant truth value; class `lo` is the representative
    clock value. The last class of a graph built without cutoff is [H, inf).
    With a cutoff, every tick beyond it collapses into one EXPIRED node.
    """

    eta: ExtendedTa
    classes: List[Tuple[int, Optional[int]]]
    nodes: List[Tuple[LocKey, int]]
    succ: List[List[int]]
    pred: List[List[int]]
    horizon: int
    cutoff: Optional[int] = None
    initial: int = 0

    def __len__(self) -> int:
        return len(self.nodes)

    def location(self, node: int) -> LocKey:
        return self.nodes[node][0]

    def time(self, node: int) -> int:
        key, ci = self.nodes[node]
        if key == EXPIRED:
            return self.cutoff + 1
        return self.classes[ci][0]

    def labels(self, node: int) -> FrozenSet[str]:
        key = self.nodes[node][0]
        if isinstance(key, str):
            return frozenset()
        return self.eta.base.locations[key].labels


def required_horizon(eta: ExtendedTa, extra_constants: Iterable[int] = ()) -> int:
    """1 + the largest constant of the automaton, its Loc_inf bounds and the formula."""
    top = max([eta.base.max_constant, *eta.entry_bounds.values(), *extra_constants])
    return top + 1


def _clock_classes(points: List[int], top: int) -> List[Tuple[int, int]]:
    classes = []
    for i, point in enumerate(points):
        classes.append((point, point))
        nxt = points[i + 1] if i + 1 < len(points) else top + 1
        if point + 1 <= nxt - 1:
            classes.append((point + 1, nxt - 1))
    return classes


def unfold(
    eta: ExtendedTa,
    horizon: Optional[int] = None,
    cutoff: Optional[int] = None,
    extra_constants: Iterable[int] = (),
    compress: bool = True,
) -> DiscreteGraph:
    """
    Unfold the extended automaton into its reachable discrete graph.

    Args:
        eta: Extended automaton
        horizon: Saturation horizon H; defaults to the required minimum
        cutoff: Clock value after which nothing of interest changes; ticks
            beyond it merge into a single EXPIRED node
        extra_constants: Formula constants that must sit on class boundaries
        compress: Group ticks into constraint classes; False gives one
            node per tick

    Returns:
        DiscreteGraph rooted at (initial location, 0)

    Raises:
        HorizonError: horizon below the required minimum
    """
    extra = set(extra_constants)
    if cutoff is not None:
        extra.add(cutoff)
    required = required_horizon(eta, extra)
    if horizon is None:
        horizon = required
    elif horizon < required:
        raise HorizonError(f"horizon {horizon} is below the required minimum {required}")

    base = eta.base
    top = cutoff if cutoff is not None else horizon - 1
    if compress:
        points = set(base.constants_upto(top))
        points.update(b for b in eta.entry_bounds.values() if b <= top)
        points.update(c for c in extra if c <= top)
        points.update((0, top))
        classes: List[Tuple[int, Optional[int]]] = list(_clock_classes(sorted(points), top))
    else:
        classes = [(t, t) for t in range(top + 1)]
    if cutoff is None:
        classes.append((horizon, None))

    nodes: List[Tuple[LocKey, int]] = []
    index: Dict[Tuple[LocKey, int], int] = {}
    succ: List[List[int]] = []
    queue = deque()

    def node_id(key: LocKey, ci: int) -> int:
        ident = index.get((key, ci))
        if ident is None:
            ident = len(nodes)
            index[(key, ci)] = ident
            nodes.append((key, ci))
            succ.append([])
            queue.append(ident)
        return ident

    node_id(base.initial, 0)
    sink: Optional[int] = None
    while queue:
        current = queue.popleft()
        key, ci = nodes[current]
        if key == EXPIRED:
            succ[current].append(current)
            continue
        lo = classes[ci][0]
        invariant = eta.invariant(key)
        targets: List[int] = []

        if ci + 1 < len(classes):
            if invariant is None or classes[ci + 1][0] <= invariant:
                targets.append(node_id(key, ci + 1))
        elif cutoff is not None:
            if invariant is None or top + 1 <= invariant:
                if sink is None:
                    sink = node_id(EXPIRED, len(classes))
                targets.append(sink)
        elif key == LOC_INF:
            targets.append(current)

        if key != LOC_INF:
            for transition in base.outgoing.get(key, ()):
                dst = base.locations[transition.dst]
                if transition.guard <= lo <= dst.invariant:
                    targets.append(node_id(transition.dst, ci))
            bound = eta.entry_bounds.get(key)
            if bound is not None and lo >= bound:
                targets.append(node_id(LOC_INF, ci))
        succ[current].extend(targets)

    pred: List[List[int]] = [[] for _ in nodes]
    for src, targets in enumerate(succ):
        for dst in targets:
            pred[dst].append(src)

    logger.debug("unfolded %s graph: %d classes, %d nodes", eta.polarity.value, len(classes), len(nodes))
    return DiscreteGraph(eta=eta, classes=classes, nodes=nodes, succ=succ, pred=pred,
                         horizon=horizon, cutoff=cutoff)
