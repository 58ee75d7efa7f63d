"""`skewmon simulate` and `skewmon simulate-sweep`."""

import sys
from pathlib import Path
from typing import Optional, Tuple

import click
import yaml
from pydantic import ValidationError

from ...errors import ConfigError
from ...models.simulation import SimConfig
from ...services.monitor import run_sweep
from ...services.simulator import generate_trace, write_trace
from ..common import handle_errors, load_properties, parse_int_list, settings_of, with_prop_options


def _load_config(path: Optional[Path], overrides: dict) -> SimConfig:
    values = {}
    if path is not None:
        loaded = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"{path}: expected a mapping of SimConfig keys")
        values.update(loaded)
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SimConfig.model_validate(values)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "config"
        raise ConfigError(f"{where}: {first['msg']}") from e


@click.command("simulate")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="YAML file with SimConfig keys; flags override it")
@click.option("--n", type=int, default=None, help="Number of processes")
@click.option("--epsilon", type=int, default=None,
              help="Stored with the config only; skew is applied when the trace is checked")
@click.option("--seed", type=int, default=None)
@click.option("--duration", type=int, default=None, help="Trace length (raw units)")
@click.option("--sample-period", type=int, default=None)
@click.option("--mean-active", type=int, default=None)
@click.option("--mean-idle", type=int, default=None)
@click.option("--unit", type=int, default=None)
@click.option("--profile", type=click.Choice(["generic", "gathering"]), default=None)
@click.option("--assembly", default=None, help="Comma-separated assembly times (gathering)")
@click.option("--out", "out", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Output file (default: stdout)")
@handle_errors
def simulate(config_path, n, epsilon, seed, duration, sample_period, mean_active, mean_idle,
             unit, profile, assembly, out):
    """Generate a synthetic trace."""
    cfg = _load_config(config_path, {
        "n": n, "epsilon": epsilon, "seed": seed, "duration": duration,
        "sample_period": sample_period, "mean_active": mean_active, "mean_idle": mean_idle,
        "unit": unit, "profile": profile,
        "assembly": parse_int_list(assembly) if assembly else None,
    })
    records = generate_trace(cfg)
    if out is None:
        write_trace(records, sys.stdout)
    else:
        with open(out, "w", encoding="utf-8") as stream:
            count = write_trace(records, stream)
        click.echo(f"wrote {count} records to {out}", err=True)


@click.command("simulate-sweep")
@click.option("--n", "ns", default="2,3", show_default=True, help="Comma-separated process counts")
@click.option("--epsilon", "epsilons", default="0,100,200", show_default=True,
              help="Comma-separated skew bounds")
@click.option("--duration", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--unit", type=int, default=None)
@with_prop_options
@click.pass_context
@handle_errors
def sweep(ctx: click.Context, ns: str, epsilons: str, duration: int, seed: int,
          unit: Optional[int], prop: Optional[Path], prop_inline: Tuple[str, ...]):
    """Tabulate lattice size and timings over (n, epsilon)."""
    settings = settings_of(ctx)
    unit = unit or settings.unit
    defs, formulas = load_properties(prop, prop_inline, unit)
    rows = run_sweep(parse_int_list(ns), parse_int_list(epsilons), duration, seed, unit,
                     formulas, defs, settings)
    click.echo(f"{'n':>3} {'eps':>6} {'steps':>6} {'|Loc|':>8} {'|F|':>5} "
               f"{'build_ms':>9} {'check_ms':>9} {'rss_mb':>8}")
    for row in rows:
        click.echo(f"{row.n:>3} {row.epsilon:>6} {row.steps:>6} {row.locations:>8} "
                   f"{row.accepting:>5} {row.avg_build_ms:>9.3f} {row.avg_check_ms:>9.3f} "
                   f"{row.peak_rss_mb:>8.1f}")
