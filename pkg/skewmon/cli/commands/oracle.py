"""`skewmon oracle`: brute-force cross-check on small traces."""

from pathlib import Path
from typing import Optional, Tuple

import click

from ...services.monitor import build_lattice
from ...services.oracle import oracle_check
from ...services.trace_reader import read_trace, scan_processes
from ..common import exit_status, handle_errors, load_properties, settings_of, with_prop_options


@click.command("oracle")
@click.option("--trace", "trace", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@with_prop_options
@click.option("--epsilon", type=int, default=0, show_default=True)
@click.option("--unit", type=int, default=None)
@click.option("--horizon", type=int, default=None, help="Clock horizon in ticks")
@click.pass_context
@handle_errors
def command(ctx: click.Context, trace: Path, prop: Optional[Path], prop_inline: Tuple[str, ...],
            epsilon: int, unit: Optional[int], horizon: Optional[int]):
    """Evaluate the properties on the whole TRACE by path enumeration."""
    settings = settings_of(ctx)
    unit = unit or settings.unit
    defs, formulas = load_properties(prop, prop_inline, unit)
    if not formulas:
        raise click.UsageError("no formula given (use --prop or --prop-inline)")
    with open(trace, encoding="utf-8") as stream:
        store = build_lattice(read_trace(stream), defs, epsilon, unit, scan_processes(trace))
    verdicts = []
    for named in formulas:
        verdict = oracle_check(store, named.formula, horizon, settings)
        verdicts.append(verdict)
        click.echo(f"{named.name} {verdict.value}")
    ctx.exit(exit_status(verdicts))
