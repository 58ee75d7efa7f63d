"""Brute-force reference semantics for small instances.

Walks every location path from the initial CGS with every integer choice of
transition times, records whether the window was hit (<>) or violated ([])
along the way, and closes each path at an accepting location with the two
forced Loc_inf suffixes. Per-path verdicts are folded over the quantifier.
"""

import logging
from typing import Dict, FrozenSet, Optional, Tuple

from ..config import Settings
from ..errors import HorizonError, OracleScopeError
from ..models.formula import Formula, Modality, Polarity, Verdict3
from .lattice import LatticeStore
from .spec_logic import (
    combine_verdicts,
    eval_state_pred,
    fold_verdicts,
    formula_constants,
    require_defined,
)
from .timed_automaton import build_ta, extend, required_horizon

logger = logging.getLogger(__name__)


def oracle_check(
    store: LatticeStore,
    formula: Formula,
    horizon: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> Verdict3:
    """
    Verdict of `formula` by explicit enumeration.

    Args:
        store: Lattice of the observed prefix
        formula: Property to evaluate
        horizon: Clock horizon in ticks; defaults to the required minimum
        settings: Supplies the CGS/horizon caps

    Returns:
        Verdict3, UNKNOWN while no initial CGS exists

    Raises:
        DefinitionError: Formula names a predicate the lattice does not define
        OracleScopeError: Instance over the caps
        HorizonError: Explicit horizon below the required minimum
    """
    settings = settings or Settings()
    require_defined(formula.phi, (d.name for d in store.defs))
    if store.initial is None:
        return Verdict3.UNKNOWN
    if len(store) > settings.oracle_max_cgs:
        raise OracleScopeError(f"{len(store)} CGSs exceed the oracle cap of {settings.oracle_max_cgs}")

    ta = build_ta(store)
    eta = extend(ta, Polarity.TOP)
    required = required_horizon(eta, formula_constants(formula))
    if horizon is None:
        horizon = required
    if horizon < required:
        raise HorizonError(f"horizon {horizon} is below the required minimum {required}")
    if horizon > settings.oracle_max_horizon:
        raise OracleScopeError(f"horizon {horizon} exceeds the oracle cap of {settings.oracle_max_horizon}")

    window = formula.window
    eventually = formula.modality is Modality.EVENTUALLY
    leaves = settings.max_predicate_leaves

    def hit(labels: FrozenSet[str], t: int) -> bool:
        if not window.contains(t):
            return False
        holds = eval_state_pred(formula.phi, labels, t)
        return holds if eventually else not holds

    def forced(t: int, polarity: Polarity) -> bool:
        return eval_state_pred(formula.phi, frozenset(), t, True, polarity, max_leaves=leaves)

    def path_verdict(t_exit: int, flag: bool) -> Verdict3:
        suffix = range(max(t_exit, window.lo), min(window.hi, horizon) + 1)
        outcome = []
        for polarity in (Polarity.TOP, Polarity.BOT):
            if eventually:
                outcome.append(flag or any(forced(j, polarity) for j in suffix))
            else:
                outcome.append(not flag and all(forced(j, polarity) for j in suffix))
        return combine_verdicts(*outcome)

    memo: Dict[Tuple, FrozenSet[Verdict3]] = {}

    def explore(key, t_in: int, flag: bool) -> FrozenSet[Verdict3]:
        cached = memo.get((key, t_in, flag))
        if cached is not None:
            return cached
        location = ta.locations[key]
        found = set()
        seen = flag
        for t_out in range(t_in, location.invariant + 1):
            seen = seen or hit(location.labels, t_out)
            for transition in ta.outgoing.get(key, ()):
                dst = ta.locations[transition.dst]
                if transition.guard <= t_out <= dst.invariant:
                    found |= explore(transition.dst, t_out, seen)
            bound = eta.entry_bounds.get(key)
            if bound is not None and t_out >= bound:
                found.add(path_verdict(t_out, seen))
        result = frozenset(found)
        memo[(key, t_in, flag)] = result
        return result

    verdicts = explore(ta.initial, 0, False)
    logger.debug("oracle saw path verdicts %s", sorted(v.value for v in verdicts))
    return fold_verdicts(formula.quantifier, verdicts)
