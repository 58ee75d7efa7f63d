"""`skewmon export`: DOT rendering of the lattice or automata of a trace."""

from pathlib import Path
from typing import Optional, Tuple

import click

from ...models.formula import Polarity
from ...services.dot_export import extended_dot, lattice_dot, ta_dot
from ...services.monitor import build_lattice
from ...services.timed_automaton import build_ta, extend
from ...services.trace_reader import read_trace, scan_processes
from ..common import handle_errors, load_properties, settings_of, with_prop_options


@click.command("export")
@click.option("--trace", "trace", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--epsilon", type=int, default=0, show_default=True)
@click.option("--unit", type=int, default=None)
@click.option("--what", type=click.Choice(["lattice", "ta", "ext-top", "ext-bot"]), default="lattice",
              show_default=True)
@click.option("--out", "out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@with_prop_options
@click.pass_context
@handle_errors
def command(ctx: click.Context, trace: Path, epsilon: int, unit: Optional[int], what: str, out: Path,
            prop: Optional[Path], prop_inline: Tuple[str, ...]):
    """Write the lattice, the automaton or one of its extensions as DOT."""
    settings = settings_of(ctx)
    unit = unit or settings.unit
    defs, _ = load_properties(prop, prop_inline, unit)
    with open(trace, encoding="utf-8") as stream:
        store = build_lattice(read_trace(stream), defs, epsilon, unit, scan_processes(trace))
    if what == "lattice":
        lines = lattice_dot(store)
    else:
        ta = build_ta(store)
        if what == "ta":
            lines = ta_dot(ta)
        else:
            lines = extended_dot(extend(ta, Polarity.TOP if what == "ext-top" else Polarity.BOT))
    with open(out, "w", encoding="utf-8") as stream:
        stream.writelines(lines)
