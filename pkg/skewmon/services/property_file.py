"""Property files: predicate definitions and formulas.

    # comment
    define a := P1.x && P2.x
    reach: A<>[0,15000] a
    E<>[0,15000] a          # numbered PHI_<k>
"""

import logging
import re
from typing import List, Sequence, Tuple

from pydantic import ValidationError

from ..errors import DefinitionError, FormulaParseError
from ..models.formula import NamedFormula
from ..models.lattice import PredicateDef
from .spec_logic import parse_definition, parse_formula, pred_names

logger = logging.getLogger(__name__)

_DEFINE_RE = re.compile(r"^define\s+(?P<name>\w+)\s*:=\s*(?P<expr>.+)$")
_NAMED_RE = re.compile(r"^(?P<name>[A-Za-z_]\w*)\s*:\s*(?P<formula>[AE](?:<>|\[\]).*)$")


def parse_properties(
    lines: Sequence[str], unit: int = 1
) -> Tuple[List[PredicateDef], List[NamedFormula]]:
    """
    Parse definitions and formulas.

    Args:
        lines: Property-file lines (or inline properties)
        unit: Time quantum for window and clock bounds

    Returns:
        (definitions, formulas in file order)

    Raises:
        FormulaParseError: Malformed line, with the line number
        DefinitionError: Duplicate names or undefined predicates
    """
    defs: List[PredicateDef] = []
    formulas: List[NamedFormula] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            match = _DEFINE_RE.match(line)
            if match:
                defs.append(PredicateDef(name=match["name"], expr=parse_definition(match["expr"])))
                continue
            match = _NAMED_RE.match(line)
            if match:
                name, text = match["name"], match["formula"]
            else:
                name, text = f"PHI_{len(formulas) + 1}", line
            formulas.append(NamedFormula(name=name, text=text, formula=parse_formula(text, unit)))
        except FormulaParseError as e:
            raise FormulaParseError(f"line {line_no}: {e}") from e
        except ValidationError as e:
            raise FormulaParseError(f"line {line_no}: {e.errors()[0]['msg']}") from e

    _check_names(defs, formulas)
    logger.debug("parsed %d definition(s), %d formula(s)", len(defs), len(formulas))
    return defs, formulas


def _check_names(defs: Sequence[PredicateDef], formulas: Sequence[NamedFormula]) -> None:
    names = [d.name for d in defs]
    if len(set(names)) != len(names):
        raise DefinitionError("predicate defined more than once")
    ids = [f.name for f in formulas]
    if len(set(ids)) != len(ids):
        raise DefinitionError("formula name used more than once")
    known = set(names)
    for named in formulas:
        missing = pred_names(named.formula.phi) - known
        if missing:
            raise DefinitionError(
                f"{named.name} uses undefined predicate(s): {', '.join(sorted(missing))}"
            )
