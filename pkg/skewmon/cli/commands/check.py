"""`skewmon check`: stream a trace through the monitor."""

import logging
from pathlib import Path
from typing import Optional, Tuple

import click

from ...models.formula import Polarity
from ...services.dot_export import extended_dot, lattice_dot, ta_dot
from ...services.monitor import MonitorState
from ...services.timed_automaton import extend
from ...services.trace_reader import follow_trace, read_trace, scan_processes
from ..common import exit_status, handle_errors, load_properties, settings_of, with_prop_options

logger = logging.getLogger(__name__)


def _export(m: MonitorState, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / "lattice.dot", "w", encoding="utf-8") as out:
        out.writelines(lattice_dot(m.store))
    if m.ta is None:
        return
    with open(directory / "ta.dot", "w", encoding="utf-8") as out:
        out.writelines(ta_dot(m.ta))
    for polarity, name in ((Polarity.TOP, "ext-top.dot"), (Polarity.BOT, "ext-bot.dot")):
        with open(directory / name, "w", encoding="utf-8") as out:
            out.writelines(extended_dot(extend(m.ta, polarity)))


@click.command("check")
@click.option("--trace", "trace", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@with_prop_options
@click.option("--epsilon", type=int, default=0, show_default=True, help="Clock-skew bound (raw units)")
@click.option("--unit", type=int, default=None, help="Time quantum (raw units per tick)")
@click.option("--report", "report_path", type=click.Path(dir_okay=False, path_type=Path),
              help="Write one JSON step report per ingested state")
@click.option("--export-dot", "export_dir", type=click.Path(file_okay=False, path_type=Path),
              help="Write lattice/TA DOT files at end of trace")
@click.option("--watch", is_flag=True, help="Keep following the trace file as it grows")
@click.option("--processes", "processes_text", default=None,
              help="Comma-separated process ids; required with --watch")
@click.option("--memory-limit-mb", type=float, default=None, help="Abort above this resident memory")
@click.option("--quiet", is_flag=True, help="Only print final verdicts")
@click.pass_context
@handle_errors
def command(
    ctx: click.Context,
    trace: Path,
    prop: Optional[Path],
    prop_inline: Tuple[str, ...],
    epsilon: int,
    unit: Optional[int],
    report_path: Optional[Path],
    export_dir: Optional[Path],
    watch: bool,
    processes_text: Optional[str],
    memory_limit_mb: Optional[float],
    quiet: bool,
):
    """Monitor TRACE against the given properties."""
    settings = settings_of(ctx)
    unit = unit or settings.unit
    defs, formulas = load_properties(prop, prop_inline, unit)
    if not formulas:
        raise click.UsageError("no formula given (use --prop or --prop-inline)")

    if processes_text:
        processes = [p.strip() for p in processes_text.split(",") if p.strip()]
    elif watch:
        raise click.UsageError("--watch requires --processes")
    else:
        processes = scan_processes(trace)
    report_out = open(report_path, "w", encoding="utf-8") if report_path else None
    try:
        with MonitorState(formulas, defs, epsilon, unit, processes, settings,
                          memory_limit_mb=memory_limit_mb) as m:
            try:
                if watch:
                    records = follow_trace(trace)
                    for record in records:
                        _emit(m.feed(record), report_out, quiet)
                else:
                    with open(trace, encoding="utf-8") as stream:
                        for record in read_trace(stream):
                            _emit(m.feed(record), report_out, quiet)
            except KeyboardInterrupt:
                logger.info("stopped following %s", trace)
            if export_dir is not None:
                _export(m, export_dir)
            for named in formulas:
                click.echo(f"{named.name} {m.verdicts[named.name].value}")
            ctx.exit(exit_status(m.verdicts.values()))
    finally:
        if report_out is not None:
            report_out.close()


def _emit(reports, report_out, quiet: bool) -> None:
    for report in reports:
        if report_out is not None:
            report_out.write(report.model_dump_json() + "\n")
        if not quiet:
            verdicts = " ".join(f"{r.formula_id}={r.verdict.symbol}" for r in report.results)
            click.echo(f"[{report.step}] {report.proc}#{report.state_index} "
                       f"|Loc|={report.locations} {verdicts}")
