"""Graphviz DOT rendering of the lattice, the automaton and its extensions.

Each function yields DOT text in pieces, so callers can stream it to a file
with writelines().
"""

from typing import Iterator

from ..models.lattice import cgs_name
from .lattice import LatticeStore, active_surface
from .timed_automaton import ExtendedTa, TimedAutomatonView

LOC_INF_NAME = "Loc_inf"


def _quote(text: str) -> str:
    return '"{}"'.format(text.replace('"', r"\""))


def _label(*lines: str) -> str:
    return _quote("\\n".join(lines))


def lattice_dot(store: LatticeStore) -> Iterator[str]:
    """CGS lattice; active-surface CGSs get a double border."""
    active = {c.coords for c in active_surface(store)}
    yield "digraph lattice {\n"
    yield "  rankdir=BT;\n"
    for coords in store.order:
        cgs = store.cgs[coords]
        shape = "doublecircle" if coords in active else "circle"
        labels = ",".join(sorted(cgs.labels)) or "-"
        yield "  {} [shape={} label={}];\n".format(
            _quote(cgs.name), shape,
            _label(cgs.name, f"I_def={cgs.i_def}", f"I_pos={cgs.i_pos}", f"{{{labels}}}"),
        )
    for src, dst in store.edges():
        yield "  {} -> {};\n".format(_quote(cgs_name(src)), _quote(cgs_name(dst)))
    yield "}\n"


def _ta_body(ta: TimedAutomatonView) -> Iterator[str]:
    for coords, location in ta.locations.items():
        shape = "doublecircle" if coords in ta.accepting else "circle"
        style = " style=bold" if coords == ta.initial else ""
        labels = ",".join(sorted(location.labels)) or "-"
        yield "  {} [shape={}{} label={}];\n".format(
            _quote(location.name), shape, style,
            _label(location.name, f"inv: T<={location.invariant}", f"{{{labels}}}"),
        )
    for transition in ta.transitions:
        yield "  {} -> {} [label={}];\n".format(
            _quote(cgs_name(transition.src)),
            _quote(cgs_name(transition.dst)),
            _quote(f"T>={transition.guard}"),
        )


def ta_dot(ta: TimedAutomatonView) -> Iterator[str]:
    """Base automaton: invariants on locations, guards on edges."""
    yield "digraph ta {\n"
    yield from _ta_body(ta)
    yield "}\n"


def extended_dot(eta: ExtendedTa) -> Iterator[str]:
    """Extended automaton with Loc_inf labelled by its polarity."""
    yield "digraph ta_{} {{\n".format(eta.polarity.value)
    yield from _ta_body(eta.base)
    yield "  {} [shape=box label={}];\n".format(
        _quote(LOC_INF_NAME), _label(LOC_INF_NAME, eta.polarity.name),
    )
    yield "  {} -> {};\n".format(_quote(LOC_INF_NAME), _quote(LOC_INF_NAME))
    for coords, bound in sorted(eta.entry_bounds.items()):
        yield "  {} -> {} [label={} style=dashed];\n".format(
            _quote(cgs_name(coords)), _quote(LOC_INF_NAME), _quote(f"T>={bound}"),
        )
    yield "}\n"
