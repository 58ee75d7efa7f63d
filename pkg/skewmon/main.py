"""Command-line entry point."""

from typing import Optional

import click

from .cli.commands import check, export, oracle, simulate
from .config import Settings, get_settings
from .logging_setup import configure_logging


@click.group()
@click.option("--log-level", default=None,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
              help="Overrides SKEWMON_LOG_LEVEL")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]):
    """Runtime verification of partially synchronous traces."""
    settings = get_settings()
    if log_level:
        settings = settings.model_copy(update={"log_level": log_level.upper()})
    ctx.obj = settings
    configure_logging(settings.log_level)


cli.add_command(check.command)
cli.add_command(simulate.simulate)
cli.add_command(simulate.sweep)
cli.add_command(oracle.command)
cli.add_command(export.command)


def main():
    cli()


if __name__ == "__main__":
    main()
