import pytest

from app.core.actions import Action, FreshNames, is_legal_read_set, ordered, urgentify_readset
from app.core.config import get_settings
from app.core.errors import ImproperInput, ParseError
from app.core.predicates import (
    alphabet,
    is_guarded,
    is_initial,
    is_proper,
    is_read_guarded,
    is_rnf,
    is_x_proper,
    proper_violation,
    rnf_violation,
    sort,
)
from app.core.relabelling import Relabelling
from app.core.terms import (
    NIL,
    Language,
    Par,
    Prefix,
    Relabel,
    Var,
    free_vars,
    replace_at,
    subterm_at,
    substitute,
    unfold,
)
from app.syntax.parser import parse_term
from app.syntax.printer import print_term
from tests.generators import NAMES, TermGenerator, random_proper_s_term


def s(text):
    return parse_term(text, Language.S)


def test_sort_of_reader(reader):
    assert sort(reader) == {"a", "b"}


def test_sort_includes_image_base():
    assert sort(parse_term("(a.0)[a->b]")) == {"a", "b"}
    assert sort(parse_term("(a.0)[a->tau]")) == {"a"}


def test_alphabet_covers_sync_sets_and_relabellings():
    assert alphabet(parse_term("(a.0 |[z]| b.0)[c->d]")) >= {"a", "b", "z", "c", "d"}


def test_is_guarded_through_read_set():
    body = parse_term("{a} |> b.(c.0 + x)", Language.S, allow_open=True)
    assert is_guarded("x", body)


def test_strict_guarding_ignores_reads():
    body = parse_term("a |> x", allow_open=True)
    assert is_guarded("x", body)
    assert not is_guarded("x", body, strict=True)


def test_substitute_unfolds_read_recursion():
    body = parse_term("a |> b.x", allow_open=True)
    result = substitute(body, "x", parse_term("rec x. a |> b.x"))
    assert print_term(result) == "a |> b.rec x. a |> b.x"


def test_substitution_adds_no_new_names(rng):
    generator = TermGenerator(rng, reads="r", urgency=0.3)
    for _ in range(300):
        open_term = generator.term(rng.randint(1, 5), bound=("y",))
        replacement = generator.term(rng.randint(0, 4))
        result = substitute(open_term, "y", replacement)
        assert sort(result) <= sort(open_term) | sort(replacement)


def test_substitute_respects_binders():
    term = parse_term("rec x. a.x")
    assert substitute(term, "x", NIL) == term


def test_unfold_closes_the_body():
    term = parse_term("rec x. a.x")
    assert free_vars(unfold(term)) == frozenset()


@pytest.mark.parametrize(
    "text",
    [
        "{a} |> {b} |> c.0",
        "rec x. {a} |> b.(c.0 + x)",
        "rec x. {a} |> b.rec y. (c.(c.0 + y) |[]| x)",
    ],
)
def test_improper_read_set_terms(text):
    term = s(text)
    assert not is_proper(term)
    assert proper_violation(term) is not None


def test_proper_read_set_term():
    assert is_proper(s("{a,b} |> c.0"))
    assert proper_violation(s("rec x. {a} |> b.x")) is None


@pytest.mark.parametrize(
    "text, expected",
    [
        ("a.x + b.x", True),
        ("x + b.0", False),
        ("{a} |> x", False),
        ("rec y. a.x", True),
    ],
)
def test_x_proper(text, expected):
    assert is_x_proper("x", parse_term(text, Language.S, allow_open=True)) == expected


def test_nested_read_set_violation_is_at_the_root():
    violation = proper_violation(s("{a} |> {b} |> c.0"))
    assert violation.path == ()
    assert "fails at <root>" in violation.describe()


def test_rnf_examples():
    assert not is_rnf(parse_term("a |> b.0 + c.0"))
    assert is_rnf(parse_term("a |> (b.0 + c.0)"))
    assert is_rnf(parse_term("a |> b |> c.0"))


def test_rnf_violation_points_at_the_choice():
    violation = rnf_violation(parse_term("d.(a |> b.0 + c.0)"))
    assert violation.path == (0,)


def test_read_guarded():
    assert is_read_guarded(parse_term("a.0 + b.0"))
    assert not is_read_guarded(parse_term("a |> b.0"))


def test_initial_terms():
    assert is_initial(parse_term("a.b.0"))
    assert not is_initial(parse_term("!a.0"))


def test_summary_agrees_with_walkers(rng):
    generator = TermGenerator(rng, reads="s")
    for _ in range(300):
        term = generator.term(rng.randint(1, 5))
        assert is_proper(term) == (proper_violation(term) is None)
    generator = TermGenerator(rng, reads="r")
    for _ in range(300):
        term = generator.term(rng.randint(1, 5))
        assert is_rnf(term) == (rnf_violation(term) is None)


def test_urgentify_readset():
    assert urgentify_readset({Action("a"), Action("b", urgent=True)}) == {
        Action("a", urgent=True),
        Action("b", urgent=True),
    }


def test_urgentify_readset_is_idempotent(rng):
    for _ in range(200):
        names = rng.sample(NAMES, rng.randint(0, len(NAMES)))
        read_set = frozenset(Action(name, urgent=rng.random() < 0.5) for name in names)
        once = urgentify_readset(read_set)
        assert urgentify_readset(once) == once
        assert is_legal_read_set(once)


def test_properness_survives_parallel_and_relabelling(rng):
    for _ in range(200):
        left, right = random_proper_s_term(rng), random_proper_s_term(rng)
        sync = frozenset(name for name in NAMES if rng.random() < 0.3)
        assert is_proper(Par(left, right, sync))
        relabelling = Relabelling.of({rng.choice(NAMES): rng.choice(NAMES + ("tau",))})
        assert is_proper(Relabel(left, relabelling))


def test_read_set_with_both_copies_is_illegal():
    assert not is_legal_read_set({Action("a"), Action("a", urgent=True)})
    assert is_legal_read_set({Action("a"), Action("b", urgent=True)})


def test_actions_are_ordered_tau_first():
    actions = [Action("b"), Action("tau"), Action("a")]
    assert [action.name for action in ordered(actions)] == ["tau", "a", "b"]


def test_fresh_names_avoid_used_ones():
    fresh = FreshNames({"e1", "e3"})
    assert [next(fresh) for _ in range(3)] == ["e2", "e4", "e5"]


def test_relabelling_composition_and_preimage():
    inner = Relabelling.of({"a": "b"})
    outer = Relabelling.of({"b": "c"})
    composed = inner.then(outer)
    assert composed("a") == "c"
    assert composed("b") == "c"
    assert Relabelling.of({"a": "b"}).preimage("b") == {"a", "b"}
    assert Relabelling.of({"a": "a"}) == Relabelling()


def test_hiding_maps_names_to_tau():
    hiding = Relabelling.hiding(["a", "b"])
    assert hiding("a") == "tau"
    assert hiding("c") == "c"
    assert hiding.hidden == {"a", "b"}


def test_tau_cannot_be_relabelled():
    with pytest.raises(ValueError):
        Relabelling.of({"tau": "a"})


def test_replace_and_subterm_at():
    term = parse_term("a.(b.0 + c.0)")
    assert print_term(subterm_at(term, (0, 1))) == "c.0"
    replaced = replace_at(term, (0, 1), Prefix(Action("d"), Var("x")))
    assert print_term(replaced) == "a.(b.0 + d.x)"
    with pytest.raises(IndexError):
        subterm_at(term, (3,))


def test_error_documents_render_paths():
    error = ImproperInput("bad", path=(0, 1))
    assert error.to_dict() == {"kind": "improper_input", "message": "bad", "path": "0.1"}
    positioned = ParseError("oops", 2, 5)
    assert positioned.to_dict()["line"] == 2
    assert "line 2, column 5" in positioned.message


def test_settings_from_environment(monkeypatch):
    get_settings.cache_clear()
    monkeypatch.setenv("PAFAS_MAX_STATES", "42")
    monkeypatch.setenv("PAFAS_MAX_DEPTH", "not-a-number")
    try:
        settings = get_settings()
        assert settings.max_states == 42
        assert settings.max_depth == 500
    finally:
        get_settings.cache_clear()

