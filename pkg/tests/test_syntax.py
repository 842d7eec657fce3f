import pytest

from app.core.errors import (
    FreeVariable,
    IllegalReadSet,
    ParseError,
    ShadowedBinder,
    UnguardedRecursion,
    UnknownName,
    UrgencyPosition,
    WrongLanguage,
)
from app.core.terms import Language, Par, Rec, ReadPrefix, ReadSet, Sum
from app.syntax.parser import parse, parse_term
from app.syntax.printer import print_term
from tests.generators import TermGenerator

BOOLEAN_ARRAY = """
# two boolean variables, true and false
Pt <= rtt.Pt + rtf.Pt + wt.Pt + wf.Pf
Pf <= rft.Pf + rff.Pf + wt.Pt + wf.Pf
main = Pt |[]| Pf
"""


def test_precedence_prefix_binds_tighter_than_choice():
    term = parse_term("a.0 + b.0 |[a]| c.0")
    assert isinstance(term, Sum)
    assert isinstance(term.right, Par)


def test_read_prefix_and_read_set_infer_the_language():
    assert parse("a |> b.0").language is Language.R
    assert parse("{a,!b} |> c.0").language is Language.S
    assert parse("a.0").language is None


def test_mixing_read_forms_is_rejected():
    with pytest.raises(WrongLanguage):
        parse_term("a |> {b} |> c.0")


def test_explicit_language_is_enforced():
    with pytest.raises(WrongLanguage) as caught:
        parse_term("a |> b.0", Language.S)
    assert caught.value.line == 1


def test_syntax_error_is_positioned():
    with pytest.raises(ParseError) as caught:
        parse_term("a.0 +\n  ) b.0")
    assert caught.value.kind == "syntax_error"
    assert caught.value.line == 2
    assert caught.value.column == 3


def test_unexpected_end_of_input():
    with pytest.raises(ParseError, match="end of input"):
        parse_term("a.")


def test_unguarded_recursion_is_rejected():
    with pytest.raises(UnguardedRecursion):
        parse_term("rec x. x + a.0")


def test_read_guarding_is_not_enough():
    with pytest.raises(UnguardedRecursion):
        parse_term("rec x. a |> x")


def test_urgent_action_below_prefix_is_rejected():
    with pytest.raises(UrgencyPosition):
        parse_term("a.!b.0")


def test_urgent_read_prefix_is_allowed_at_top():
    term = parse_term("!a |> b.0")
    assert isinstance(term, ReadPrefix) and term.action.urgent


def test_illegal_read_set():
    with pytest.raises(IllegalReadSet):
        parse_term("{a,!a} |> b.0")


def test_empty_read_set():
    term = parse_term("{} |> a.0", Language.S)
    assert isinstance(term, ReadSet) and not term.actions


def test_free_variable_is_rejected_unless_open():
    with pytest.raises(FreeVariable):
        parse_term("a.x")
    assert print_term(parse_term("a.x", allow_open=True)) == "a.x"


def test_shadowed_binder():
    with pytest.raises(ShadowedBinder):
        parse_term("rec x. a.rec x. b.x")


def test_unknown_equation():
    with pytest.raises(UnknownName):
        parse_term("main = a.Q")


def test_duplicate_relabelling():
    with pytest.raises(ParseError, match="relabelled twice"):
        parse_term("(a.0)[a->b, a->c]")


def test_equations_desugar_into_recursion():
    program = parse(BOOLEAN_ARRAY)
    assert [equation.name for equation in program.equations] == ["Pt", "Pf"]
    assert isinstance(program.term, Par)
    assert isinstance(program.term.left, Rec) and program.term.left.var == "Pt"
    assert "Pf" in print_term(program.term.left)


def test_unguarded_equation_points_at_the_equation():
    with pytest.raises(UnguardedRecursion) as caught:
        parse("P <= P + a.0\nmain = P")
    assert caught.value.line == 1


def test_comments_and_whitespace_are_ignored():
    assert parse_term("a.0 # trailing\n + b.0") == parse_term("a.0 + b.0")


def test_tau_and_hiding():
    assert print_term(parse_term("tau.(a.0)[a->tau]")) == "tau.(a.0)[a->tau]"


def test_printer_is_canonical():
    assert print_term(parse_term("{b, a} |> c.0")) == "{a,b} |> c.0"
    assert print_term(parse_term("a.0 |[c, b]| (d.0 + e.0)")) == "a.0 |[b,c]| (d.0 + e.0)"
    assert print_term(parse_term("(a.0 + b.0) + c.0")) == "a.0 + b.0 + c.0"
    assert print_term(parse_term("a.0 + (b.0 + c.0)")) == "a.0 + (b.0 + c.0)"


@pytest.mark.parametrize("reads, language", [("r", Language.R), ("s", Language.S), ("", None)])
def test_print_then_parse_gives_the_same_term(rng, reads, language):
    generator = TermGenerator(rng, reads=reads, urgency=0.3)
    for _ in range(1000):
        term = generator.term(rng.randint(0, 6))
        assert parse_term(print_term(term), language) == term
