"""CTL fixpoints over the unfolded graph and the two-automata verdict.

The unfolded graph is a DAG apart from self-loops on terminal nodes
(Loc_inf at the last class, or the EXPIRED sink), so every infinite path
ends in such a loop.
"""

import logging
from collections import deque
from typing import List, Optional, Tuple

from ..errors import GraphError
from ..models.formula import CtlFormula, Formula, Modality, Polarity, Quantifier, Verdict3
from .spec_logic import (
    DEFAULT_MAX_LEAVES,
    combine_verdicts,
    eval_state_pred,
    formula_constants,
    require_defined,
    to_ctl,
)
from .timed_automaton import EXPIRED, LOC_INF, DiscreteGraph, TimedAutomatonView, extend, unfold

logger = logging.getLogger(__name__)


def _satisfying(graph: DiscreteGraph, ctl: CtlFormula, polarity: Polarity, max_leaves: int) -> List[bool]:
    sat = []
    for node in range(len(graph)):
        key = graph.location(node)
        sat.append(eval_state_pred(
            ctl.psi,
            graph.labels(node),
            graph.time(node),
            at_loc_inf=key == LOC_INF,
            polarity=polarity if key != EXPIRED else Polarity.NONE,
            max_leaves=max_leaves,
        ))
    return sat


def _exists_eventually(graph: DiscreteGraph, sat: List[bool]) -> bool:
    seen = [False] * len(graph)
    queue = deque(n for n, ok in enumerate(sat) if ok)
    for n in queue:
        seen[n] = True
    while queue:
        node = queue.popleft()
        for prev in graph.pred[node]:
            if not seen[prev]:
                seen[prev] = True
                queue.append(prev)
    return seen[graph.initial]


def _forall_eventually(graph: DiscreteGraph, sat: List[bool]) -> bool:
    # least fixpoint: a node is in once psi holds or all successors are in
    remaining = [len(s) for s in graph.succ]
    inside = list(sat)
    queue = deque(n for n, ok in enumerate(sat) if ok)
    while queue:
        node = queue.popleft()
        for prev in graph.pred[node]:
            if inside[prev]:
                continue
            remaining[prev] -= 1
            if remaining[prev] == 0:
                inside[prev] = True
                queue.append(prev)
    return inside[graph.initial]


def _exists_always(graph: DiscreteGraph, sat: List[bool]) -> bool:
    # greatest fixpoint: drop psi-nodes whose successors have all been dropped
    inside = list(sat)
    alive = [sum(1 for s in graph.succ[n] if sat[s]) for n in range(len(graph))]
    queue = deque(n for n in range(len(graph)) if inside[n] and alive[n] == 0)
    for n in queue:
        inside[n] = False
    queue.extend(n for n, ok in enumerate(sat) if not ok)
    while queue:
        node = queue.popleft()
        for prev in graph.pred[node]:
            if not inside[prev] or not sat[node]:
                continue
            alive[prev] -= 1
            if alive[prev] == 0:
                inside[prev] = False
                queue.append(prev)
    return inside[graph.initial]


def check_ctl(
    graph: DiscreteGraph,
    ctl: CtlFormula,
    polarity: Optional[Polarity] = None,
    max_leaves: int = DEFAULT_MAX_LEAVES,
) -> bool:
    """
    Decide a nesting-free CTL formula at the graph's initial node.

    Args:
        graph: Unfolded extended automaton
        ctl: Formula with its window folded into psi
        polarity: Forcing at Loc_inf; defaults to the graph's extension
        max_leaves: Forcing cap passed to the evaluator

    Returns:
        Whether the initial node satisfies the formula

    Raises:
        GraphError: Empty graph or a node without successors
    """
    if not len(graph):
        raise GraphError("graph has no initial node")
    for node, targets in enumerate(graph.succ):
        if not targets:
            key, ci = graph.nodes[node]
            raise GraphError(f"dead end at {key} with clock class {graph.classes[ci]}")
    polarity = graph.eta.polarity if polarity is None else polarity
    sat = _satisfying(graph, ctl, polarity, max_leaves)

    if ctl.modality is Modality.EVENTUALLY:
        if ctl.quantifier is Quantifier.EXISTS:
            return _exists_eventually(graph, sat)
        return _forall_eventually(graph, sat)
    if ctl.quantifier is Quantifier.EXISTS:
        return _exists_always(graph, sat)
    # every node of the graph is reachable from the initial one
    return all(sat)


def check_detailed(
    ta: TimedAutomatonView,
    formula: Formula,
    compress: bool = True,
    max_leaves: int = DEFAULT_MAX_LEAVES,
) -> Tuple[Verdict3, bool, bool]:
    """Return (verdict, result on the TOP extension, result on the BOT extension)."""
    require_defined(formula.phi, ta.defined)
    ctl = to_ctl(formula)
    constants = formula_constants(formula)
    results = []
    for polarity in (Polarity.TOP, Polarity.BOT):
        eta = extend(ta, polarity)
        graph = unfold(eta, cutoff=ctl.cutoff, extra_constants=constants, compress=compress)
        results.append(check_ctl(graph, ctl, polarity, max_leaves))
    v_top, v_bot = results
    if v_bot and not v_top:
        logger.warning("BOT extension satisfied a formula its TOP extension violates")
    return combine_verdicts(v_top, v_bot), v_top, v_bot


def check(
    ta: TimedAutomatonView,
    formula: Formula,
    compress: bool = True,
    max_leaves: int = DEFAULT_MAX_LEAVES,
) -> Verdict3:
    """Three-valued verdict of `formula` on the observed prefix."""
    return check_detailed(ta, formula, compress, max_leaves)[0]
