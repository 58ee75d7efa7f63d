"""Helpers shared by the commands."""

import functools
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

import click

from ..config import Settings
from ..errors import SkewmonError
from ..models.formula import NamedFormula, Verdict3
from ..models.lattice import PredicateDef
from ..services.property_file import parse_properties

logger = logging.getLogger("skewmon.cli")

EXIT_ERROR = 3


def handle_errors(command):
    """Turn SkewmonError into a diagnostic on stderr and exit status 3."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except SkewmonError as e:
            logger.error("%s: %s", type(e).__name__, e)
            click.echo(f"error: {e}", err=True)
            raise SystemExit(EXIT_ERROR)

    return wrapper


def settings_of(ctx: click.Context) -> Settings:
    obj = ctx.find_object(Settings)
    return obj if obj is not None else Settings()


def load_properties(
    prop: Optional[Path], inline: Sequence[str], unit: int
) -> Tuple[List[PredicateDef], List[NamedFormula]]:
    """Read the property file and/or inline properties (`;` separates lines)."""
    lines: List[str] = []
    if prop is not None:
        lines.extend(prop.read_text(encoding="utf-8").splitlines())
    for text in inline:
        lines.extend(part for part in text.split(";"))
    return parse_properties(lines, unit)


def exit_status(verdicts: Iterable[Verdict3]) -> int:
    """0 if every verdict is TRUE, 1 if any is FALSE, 2 otherwise."""
    verdicts = list(verdicts)
    if any(v is Verdict3.BOT for v in verdicts):
        return 1
    if all(v is Verdict3.TOP for v in verdicts):
        return 0
    return 2


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}")


prop_options = [
    click.option("--prop", "prop", type=click.Path(exists=True, dir_okay=False, path_type=Path),
                 help="Property file"),
    click.option("--prop-inline", "prop_inline", multiple=True,
                 help="Inline property; repeatable, `;` separates lines"),
]


def with_prop_options(command):
    for option in reversed(prop_options):
        command = option(command)
    return command
