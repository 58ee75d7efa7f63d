"""Tests for the property language and verdict algebra."""

import random

import pytest

from skewmon.errors import DefinitionError, FormulaParseError, QuantizationError, UnsupportedFeatureError
from skewmon.models.formula import (
    And,
    AtomRef,
    ClockCmp,
    Const,
    Implies,
    Modality,
    Not,
    Or,
    Polarity,
    PredRef,
    Quantifier,
    Verdict3,
)
from skewmon.models.trace import Interval
from skewmon.services.property_file import parse_properties
from skewmon.services.spec_logic import (
    combine_verdicts,
    eval_state_pred,
    fold_verdicts,
    format_formula,
    not3,
    parse_definition,
    parse_formula,
    to_ctl,
)

from tests.fixtures import random_formula


class TestParse:

    def test_forall_eventually(self):
        """A<>[0,15000] a."""
        f = parse_formula("A<>[0,15000] a")
        assert f.quantifier is Quantifier.FORALL
        assert f.modality is Modality.EVENTUALLY
        assert f.window == Interval(lo=0, hi=15000)
        assert f.phi == PredRef("a")

    def test_exists_always_negated(self):
        """E[][0,0] !a."""
        f = parse_formula("E[][0,0] !a")
        assert (f.quantifier, f.modality) == (Quantifier.EXISTS, Modality.ALWAYS)
        assert f.phi == Not(PredRef("a"))

    def test_nested_modality(self):
        """A modal operator inside the predicate is unsupported."""
        with pytest.raises(UnsupportedFeatureError):
            parse_formula("A<>[0,5] (E<>[0,3] a)")

    def test_precedence(self):
        """! binds tighter than &&, && than ||, || than ->; -> is right-associative."""
        f = parse_formula("E<>[0,9] !a && b || c -> d -> e")
        assert f.phi == Implies(
            Or(And(Not(PredRef("a")), PredRef("b")), PredRef("c")),
            Implies(PredRef("d"), PredRef("e")),
        )

    def test_clock_constraints(self):
        """T comparisons with every operator."""
        f = parse_formula("A[][2,7] T<3 || T<=3 || T>3 || T>=3 || T==3")
        leaves = []
        node = f.phi
        while isinstance(node, Or):
            leaves.append(node.right)
            node = node.left
        leaves.append(node)
        assert sorted(c.op for c in leaves) == sorted(["<", "<=", ">", ">=", "=="])

    def test_constants(self):
        """true and false are literals."""
        assert parse_formula("A[][0,1] true").phi == Const(True)
        assert parse_formula("A[][0,1] !false").phi == Not(Const(False))

    def test_malformed_window(self):
        """lo > hi is a parse error."""
        with pytest.raises(FormulaParseError):
            parse_formula("A<>[5,2] a")

    def test_unbounded_window(self):
        """Infinite upper bounds are not supported."""
        with pytest.raises(UnsupportedFeatureError):
            parse_formula("A<>[0,inf] a")

    def test_position_reported(self):
        """Errors carry the offending position."""
        with pytest.raises(FormulaParseError) as excinfo:
            parse_formula("A<>[0,5] a && ")
        assert excinfo.value.position == len("A<>[0,5] a && ")

    def test_bad_character(self):
        """Unknown characters are rejected."""
        with pytest.raises(FormulaParseError) as excinfo:
            parse_formula("A<>[0,5] a $ b")
        assert excinfo.value.position == 11

    def test_atoms_only_in_definitions(self):
        """PROC.atom is not a formula leaf."""
        with pytest.raises(FormulaParseError):
            parse_formula("A<>[0,5] P1.x")

    def test_definition(self):
        """Definitions reference per-process atoms."""
        assert parse_definition("P1.x && !P2.x") == And(AtomRef("P1", "x"), Not(AtomRef("P2", "x")))

    def test_unit_scaling(self):
        """Bounds are converted to ticks."""
        f = parse_formula("A<>[1000,16000] a && T>=2000", unit=1000)
        assert f.window == Interval(lo=1, hi=16)
        assert f.phi == And(PredRef("a"), ClockCmp(">=", 2))

    def test_unit_violation(self):
        """Bounds off the quantum grid are rejected."""
        with pytest.raises(QuantizationError):
            parse_formula("A<>[0,1500] a", unit=1000)

    def test_round_trip(self):
        """Printing then parsing gives the same formula."""
        rng = random.Random(42)
        for _ in range(300):
            f = random_formula(rng)
            if rng.random() < 0.3:
                f = f.model_copy(update={"phi": And(f.phi, ClockCmp(rng.choice(["<", "<=", "=="]), 4))})
            assert parse_formula(format_formula(f)) == f


class TestToCtl:

    def test_eventually_from_zero(self):
        """A<>[0,15000] a becomes A<>(T<=15000 && a)."""
        ctl = to_ctl(parse_formula("A<>[0,15000] a"))
        assert ctl.quantifier is Quantifier.FORALL
        assert ctl.psi == And(ClockCmp("<=", 15000), PredRef("a"))

    def test_always_bounded(self):
        """E[][2,7] a becomes E[]((T>=2 && T<=7) -> a)."""
        ctl = to_ctl(parse_formula("E[][2,7] a"))
        assert ctl.psi == Implies(And(ClockCmp(">=", 2), ClockCmp("<=", 7)), PredRef("a"))
        assert ctl.cutoff == 7

    def test_always_true_is_tautology(self):
        """A[] over true holds at every clock value."""
        ctl = to_ctl(parse_formula("A[][0,40] true"))
        assert all(eval_state_pred(ctl.psi, frozenset(), t) for t in range(60))


class TestEvalStatePred:

    def test_label(self):
        """a holds where labeled."""
        assert eval_state_pred(PredRef("a"), frozenset({"a"}), 0)

    def test_clock_bound(self):
        """a && T<=15 fails at 16."""
        assert not eval_state_pred(And(PredRef("a"), ClockCmp("<=", 15)), frozenset({"a"}), 16)

    def test_bot_forcing(self):
        """At Loc_inf under BOT, a is false whatever the labels."""
        assert not eval_state_pred(PredRef("a"), frozenset({"a"}), 3, True, Polarity.BOT)

    def test_top_forcing(self):
        """At Loc_inf under TOP, a is true."""
        assert eval_state_pred(PredRef("a"), frozenset(), 3, True, Polarity.TOP)

    def test_forcing_keeps_clock(self):
        """Clock leaves still read the clock at Loc_inf."""
        phi = And(PredRef("a"), ClockCmp("<=", 5))
        assert not eval_state_pred(phi, frozenset(), 6, True, Polarity.TOP)
        assert eval_state_pred(phi, frozenset(), 5, True, Polarity.TOP)

    def test_forcing_with_negation(self):
        """!a is possible under TOP and not certain under BOT."""
        phi = Not(PredRef("a"))
        assert eval_state_pred(phi, frozenset(), 0, True, Polarity.TOP)
        assert not eval_state_pred(phi, frozenset(), 0, True, Polarity.BOT)

    def test_forcing_tautology(self):
        """a || !a is certain under both polarities."""
        phi = Or(PredRef("a"), Not(PredRef("a")))
        assert eval_state_pred(phi, frozenset(), 0, True, Polarity.BOT)

    def test_top_implies_bot(self):
        """Forcing under BOT never holds where TOP fails."""
        rng = random.Random(1)
        for _ in range(200):
            phi = random_formula(rng).phi
            top = eval_state_pred(phi, frozenset(), 0, True, Polarity.TOP)
            bot = eval_state_pred(phi, frozenset(), 0, True, Polarity.BOT)
            assert top or not bot

    def test_unknown_predicate(self):
        """A name that no definition declares is an error."""
        with pytest.raises(DefinitionError):
            eval_state_pred(PredRef("zz"), frozenset(), 0, known={"a"})

    def test_leaf_cap(self):
        """Forcing refuses predicates with too many names."""
        phi = PredRef("p0")
        for i in range(1, 4):
            phi = And(phi, PredRef(f"p{i}"))
        with pytest.raises(DefinitionError):
            eval_state_pred(phi, frozenset(), 0, True, Polarity.TOP, max_leaves=3)


class TestVerdicts:

    def test_combine(self):
        """Agreement decides; disagreement is inconclusive."""
        assert combine_verdicts(True, True) is Verdict3.TOP
        assert combine_verdicts(False, False) is Verdict3.BOT
        assert combine_verdicts(True, False) is Verdict3.UNKNOWN

    def test_not3(self):
        """Negation swaps TRUE/FALSE and fixes INCONCLUSIVE."""
        assert not3(Verdict3.TOP) is Verdict3.BOT
        assert not3(Verdict3.BOT) is Verdict3.TOP
        assert not3(Verdict3.UNKNOWN) is Verdict3.UNKNOWN

    def test_fold(self):
        """FORALL is a three-valued AND, EXISTS an OR."""
        mix = [Verdict3.TOP, Verdict3.UNKNOWN]
        assert fold_verdicts(Quantifier.FORALL, mix) is Verdict3.UNKNOWN
        assert fold_verdicts(Quantifier.EXISTS, mix) is Verdict3.TOP
        assert fold_verdicts(Quantifier.FORALL, mix + [Verdict3.BOT]) is Verdict3.BOT
        assert fold_verdicts(Quantifier.EXISTS, [Verdict3.BOT, Verdict3.UNKNOWN]) is Verdict3.UNKNOWN

    def test_symbols(self):
        """Display symbols."""
        assert [v.symbol for v in Verdict3] == ["⊤", "⊥", "?"]


class TestPropertyFile:

    def test_definitions_and_numbering(self):
        """Unnamed formulas are numbered by position, named ones keep their names."""
        defs, formulas = parse_properties([
            "# gathering",
            "define at1 := P1.at_assembly",
            "define at2 := P2.at_assembly",
            "A<>[0,16000] (at1 && at2)",
            "reach_any: E<>[0,16000] (at1 && at2)   # existential twin",
            "",
            "A<>[0,14000] at1 && at2",
        ])
        assert [d.name for d in defs] == ["at1", "at2"]
        assert [f.name for f in formulas] == ["PHI_1", "reach_any", "PHI_3"]
        assert formulas[1].formula.quantifier is Quantifier.EXISTS

    def test_undefined_predicate(self):
        """Formulas may only use defined predicates."""
        with pytest.raises(DefinitionError):
            parse_properties(["A<>[0,5] a"])

    def test_error_has_line_number(self):
        """Parse errors name the line."""
        with pytest.raises(FormulaParseError, match="line 2"):
            parse_properties(["define a := P1.x", "A<>[0,5] a &&"])

    def test_duplicate_definition(self):
        """A predicate can only be defined once."""
        with pytest.raises(DefinitionError):
            parse_properties(["define a := P1.x", "define a := P2.x"])
