"""Property language: parsing, printing, state-predicate evaluation and verdicts.

Surface grammar (one formula per line)::

    formula := MODAL '[' INT ',' INT ']' expr
    MODAL   := 'A<>' | 'E<>' | 'A[]' | 'E[]'
    expr    := or ('->' expr)?
    or      := and ('||' and)*
    and     := unary ('&&' unary)*
    unary   := '!' unary | '(' expr ')' | 'true' | 'false' | 'T' CMP INT | NAME

Predicate definitions (`define a := P1.x && P2.x`) use the same expression
grammar with PROC.atom references instead of predicate names.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterable, List, Mapping, Optional, Set

from ..errors import DefinitionError, FormulaParseError, UnsupportedFeatureError
from ..models.formula import (
    And,
    AtomRef,
    ClockCmp,
    Const,
    CtlFormula,
    Expr,
    Formula,
    Implies,
    Modality,
    Not,
    Or,
    Polarity,
    PredRef,
    Quantifier,
    Verdict3,
)
from ..models.trace import Interval
from .trace_model import Quantizer

logger = logging.getLogger(__name__)

DEFAULT_MAX_LEAVES = 12

_TOKEN_RE = re.compile(
    r"""\s*(?:
      (?P<MODAL>[AE](?:<>|\[\]))
    | (?P<IMPLIES>->)
    | (?P<AND>&&)
    | (?P<OR>\|\|)
    | (?P<CMP><=|>=|==|<|>)
    | (?P<NOT>!)
    | (?P<LPAREN>\()
    | (?P<RPAREN>\))
    | (?P<LBRACK>\[)
    | (?P<RBRACK>\])
    | (?P<COMMA>,)
    | (?P<INT>\d+)
    | (?P<NAME>[A-Za-z_]\w*(?:\.[A-Za-z_]\w*)?)
    )""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    position: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.lastgroup is None:
            start = len(text) - len(text[pos:].lstrip())
            raise FormulaParseError(f"unexpected character {text[start]!r}", start)
        tokens.append(_Token(match.lastgroup, match.group(match.lastgroup), match.start(match.lastgroup)))
        pos = match.end()
    tokens.append(_Token("END", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, unit: int, allow_atoms: bool):
        self.tokens = _tokenize(text)
        self.i = 0
        self.quantizer = Quantizer(unit)
        self.allow_atoms = allow_atoms

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def take(self, kind: str) -> _Token:
        token = self.peek()
        if token.kind != kind:
            found = token.value or "end of input"
            raise FormulaParseError(f"expected {kind.lower()}, found {found!r}", token.position)
        self.i += 1
        return token

    def finish(self) -> None:
        token = self.peek()
        if token.kind == "MODAL":
            raise UnsupportedFeatureError("nested modal operators are not supported", token.position)
        if token.kind != "END":
            raise FormulaParseError(f"unexpected {token.value!r}", token.position)

    def formula(self) -> Formula:
        modal = self.peek()
        if modal.kind != "MODAL":
            raise FormulaParseError("formula must start with A<>, E<>, A[] or E[]", modal.position)
        self.i += 1
        self.take("LBRACK")
        lo = self.bound()
        self.take("COMMA")
        hi = self.bound()
        close = self.take("RBRACK")
        if lo > hi:
            raise FormulaParseError(f"malformed time window [{lo},{hi}]", close.position)
        phi = self.expr()
        self.finish()
        return Formula(
            quantifier=Quantifier(modal.value[0]),
            modality=Modality(modal.value[1:]),
            window=Interval(lo=lo, hi=hi),
            phi=phi,
        )

    def bound(self) -> int:
        token = self.peek()
        if token.kind == "NAME" and token.value in ("inf", "INF", "oo"):
            raise UnsupportedFeatureError("unbounded time windows are not supported", token.position)
        return self.quantizer.ticks(int(self.take("INT").value), "window bound")

    def expr(self) -> Expr:
        left = self.disjunction()
        if self.peek().kind == "IMPLIES":
            self.i += 1
            return Implies(left, self.expr())
        return left

    def disjunction(self) -> Expr:
        left = self.conjunction()
        while self.peek().kind == "OR":
            self.i += 1
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Expr:
        left = self.unary()
        while self.peek().kind == "AND":
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Expr:
        token = self.peek()
        if token.kind == "NOT":
            self.i += 1
            return Not(self.unary())
        if token.kind == "MODAL":
            raise UnsupportedFeatureError("nested modal operators are not supported", token.position)
        if token.kind == "LPAREN":
            self.i += 1
            inner = self.expr()
            self.take("RPAREN")
            return inner
        if token.kind != "NAME":
            raise FormulaParseError(f"unexpected {token.value or 'end of input'!r}", token.position)
        self.i += 1
        if token.value == "true":
            return Const(True)
        if token.value == "false":
            return Const(False)
        if token.value == "T" and self.peek().kind == "CMP":
            if self.allow_atoms:
                raise FormulaParseError("clock constraints are not allowed in definitions", token.position)
            op = self.take("CMP").value
            bound = self.quantizer.ticks(int(self.take("INT").value), "clock bound")
            return ClockCmp(op, bound)
        if "." in token.value:
            if not self.allow_atoms:
                raise FormulaParseError(
                    f"process atom {token.value!r} can only appear in a define line", token.position
                )
            proc, atom = token.value.split(".", 1)
            return AtomRef(proc, atom)
        if self.allow_atoms:
            raise FormulaParseError(f"expected PROC.atom, found {token.value!r}", token.position)
        return PredRef(token.value)


def parse_formula(text: str, unit: int = 1) -> Formula:
    """
    Parse `A<>[lo,hi] expr` and friends.

    Args:
        text: Formula text; numbers are raw time values
        unit: Time quantum the numbers are divided by

    Returns:
        Formula with window and clock bounds in ticks

    Raises:
        FormulaParseError: Malformed input (with position)
        UnsupportedFeatureError: Nested modality or unbounded window
    """
    return _Parser(text, unit, allow_atoms=False).formula()


def parse_definition(text: str) -> Expr:
    """Parse the right-hand side of a `define` line."""
    parser = _Parser(text, 1, allow_atoms=True)
    expr = parser.expr()
    parser.finish()
    return expr


def format_expr(expr: Expr, unit: int = 1) -> str:
    if isinstance(expr, Const):
        return "true" if expr.value else "false"
    if isinstance(expr, PredRef):
        return expr.name
    if isinstance(expr, AtomRef):
        return f"{expr.proc}.{expr.atom}"
    if isinstance(expr, ClockCmp):
        return f"T{expr.op}{expr.bound * unit}"
    if isinstance(expr, Not):
        return "!" + format_expr(expr.arg, unit)
    op = {And: "&&", Or: "||", Implies: "->"}[type(expr)]
    return f"({format_expr(expr.left, unit)} {op} {format_expr(expr.right, unit)})"


def format_formula(formula: Formula, unit: int = 1) -> str:
    window = formula.window
    return (
        f"{formula.quantifier.value}{formula.modality.value}"
        f"[{window.lo * unit},{window.hi * unit}] {format_expr(formula.phi, unit)}"
    )


@lru_cache(maxsize=4096)
def pred_names(expr: Expr) -> FrozenSet[str]:
    """Predicate names referenced by `expr`."""
    if isinstance(expr, PredRef):
        return frozenset([expr.name])
    if isinstance(expr, Not):
        return pred_names(expr.arg)
    if isinstance(expr, (And, Or, Implies)):
        return pred_names(expr.left) | pred_names(expr.right)
    return frozenset()


def clock_constants(expr: Expr) -> Set[int]:
    """
    Tick values where a clock leaf of `expr` may change truth value.

    Each bound contributes c-1, c and c+1 so that strict and non-strict
    comparisons both sit on class boundaries.
    """
    if isinstance(expr, ClockCmp):
        return {c for c in (expr.bound - 1, expr.bound, expr.bound + 1) if c >= 0}
    if isinstance(expr, Not):
        return clock_constants(expr.arg)
    if isinstance(expr, (And, Or, Implies)):
        return clock_constants(expr.left) | clock_constants(expr.right)
    return set()


def formula_constants(formula: Formula) -> Set[int]:
    return {formula.window.lo, formula.window.hi} | clock_constants(formula.phi)


def to_ctl(formula: Formula) -> CtlFormula:
    """
    Fold the time window into the state predicate.

    <>^J phi becomes <>(T in J && phi); []^J phi becomes [](T in J -> phi).
    """
    lo, hi = formula.window.lo, formula.window.hi
    in_window: Expr = ClockCmp("<=", hi)
    if lo > 0:
        in_window = And(ClockCmp(">=", lo), in_window)
    if formula.modality is Modality.EVENTUALLY:
        psi: Expr = And(in_window, formula.phi)
    else:
        psi = Implies(in_window, formula.phi)
    return CtlFormula(quantifier=formula.quantifier, modality=formula.modality, psi=psi, cutoff=hi)


def clock_holds(op: str, bound: int, t: int) -> bool:
    if op == "<=":
        return t <= bound
    if op == ">=":
        return t >= bound
    if op == "<":
        return t < bound
    if op == ">":
        return t > bound
    return t == bound


def _evaluate(expr: Expr, truth: Mapping[str, bool], t: int) -> bool:
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, PredRef):
        return truth.get(expr.name, False)
    if isinstance(expr, ClockCmp):
        return clock_holds(expr.op, expr.bound, t)
    if isinstance(expr, Not):
        return not _evaluate(expr.arg, truth, t)
    if isinstance(expr, And):
        return _evaluate(expr.left, truth, t) and _evaluate(expr.right, truth, t)
    if isinstance(expr, Or):
        return _evaluate(expr.left, truth, t) or _evaluate(expr.right, truth, t)
    if isinstance(expr, Implies):
        return (not _evaluate(expr.left, truth, t)) or _evaluate(expr.right, truth, t)
    raise DefinitionError(f"{format_expr(expr)} cannot appear in a state predicate")


@lru_cache(maxsize=65536)
def _forced(expr: Expr, t: int, polarity: Polarity, max_leaves: int) -> bool:
    names = sorted(pred_names(expr))
    if len(names) > max_leaves:
        raise DefinitionError(
            f"state predicate uses {len(names)} predicate names, limit is {max_leaves}"
        )
    outcomes = (
        _evaluate(expr, dict(zip(names, values)), t)
        for values in itertools.product((False, True), repeat=len(names))
    )
    if polarity is Polarity.TOP:
        return any(outcomes)
    return all(outcomes)


def require_defined(phi: Expr, known: Iterable[str]) -> None:
    """Raise DefinitionError if phi names a predicate outside `known`."""
    missing = pred_names(phi) - frozenset(known)
    if missing:
        raise DefinitionError(f"undefined predicate(s): {', '.join(sorted(missing))}")


def eval_state_pred(
    phi: Expr,
    labels: FrozenSet[str],
    t: int,
    at_loc_inf: bool = False,
    polarity: Polarity = Polarity.NONE,
    known: Optional[Iterable[str]] = None,
    max_leaves: int = DEFAULT_MAX_LEAVES,
) -> bool:
    """
    Evaluate a state predicate at a location and clock value.

    Off Loc_inf, predicate names are read from `labels`. At Loc_inf the
    names are forced: under TOP the predicate holds if some valuation of its
    names satisfies it, under BOT only if every valuation does. Clock leaves
    always read `t`.

    Args:
        phi: State predicate
        labels: Predicate names true at the location
        t: Clock value in ticks
        at_loc_inf: Whether the location is the Loc_inf sink
        polarity: Forcing used at Loc_inf
        known: Declared predicate names; unknown references raise
        max_leaves: Cap on distinct names under forcing

    Returns:
        Truth value of phi
    """
    if known is not None:
        require_defined(phi, known)
    if at_loc_inf and polarity is not Polarity.NONE:
        return _forced(phi, t, polarity, max_leaves)
    return _evaluate(phi, {name: True for name in labels}, t)


def eval_definition(expr: Expr, atoms: Mapping[str, Mapping[str, bool]]) -> bool:
    """Evaluate a predicate definition over per-process atom valuations."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, AtomRef):
        if expr.proc not in atoms:
            raise DefinitionError(f"unknown process {expr.proc!r} in {expr.proc}.{expr.atom}")
        valuation = atoms[expr.proc]
        if expr.atom not in valuation:
            raise DefinitionError(f"process {expr.proc} has no atom {expr.atom!r}")
        return bool(valuation[expr.atom])
    if isinstance(expr, Not):
        return not eval_definition(expr.arg, atoms)
    if isinstance(expr, And):
        return eval_definition(expr.left, atoms) and eval_definition(expr.right, atoms)
    if isinstance(expr, Or):
        return eval_definition(expr.left, atoms) or eval_definition(expr.right, atoms)
    if isinstance(expr, Implies):
        return (not eval_definition(expr.left, atoms)) or eval_definition(expr.right, atoms)
    raise DefinitionError(f"{format_expr(expr)} cannot appear in a predicate definition")


def combine_verdicts(v_top: bool, v_bot: bool) -> Verdict3:
    if v_top and v_bot:
        return Verdict3.TOP
    if not v_top and not v_bot:
        return Verdict3.BOT
    return Verdict3.UNKNOWN


def not3(verdict: Verdict3) -> Verdict3:
    if verdict is Verdict3.TOP:
        return Verdict3.BOT
    if verdict is Verdict3.BOT:
        return Verdict3.TOP
    return Verdict3.UNKNOWN


def fold_verdicts(quantifier: Quantifier, verdicts: Iterable[Verdict3]) -> Verdict3:
    """Fold per-path verdicts: FORALL is a 3-valued conjunction, EXISTS a disjunction."""
    seen = set(verdicts)
    if quantifier is Quantifier.FORALL:
        if Verdict3.BOT in seen:
            return Verdict3.BOT
        return Verdict3.UNKNOWN if Verdict3.UNKNOWN in seen else Verdict3.TOP
    if Verdict3.TOP in seen:
        return Verdict3.TOP
    return Verdict3.UNKNOWN if Verdict3.UNKNOWN in seen else Verdict3.BOT
