from collections import deque
from itertools import product

import pytest

from app.analysis.bisim import BisimScheme, bisim
from app.analysis.fairness import (
    fair_lasso,
    fair_lasso_lts,
    fair_member,
    fair_member_lts,
    fair_words_up_to,
    find_fair_lasso,
    format_word,
    parse_word,
)
from app.analysis.lts import Verdict, explore, is_deterministic, is_internal, visible_name
from app.analysis.traces import (
    compare_refusal_traces,
    format_trace,
    has_refusal_trace,
    parse_trace,
    refusal_traces_up_to,
)
from app.core.errors import ParseError
from app.core.relabelling import Relabelling
from app.core.terms import NIL, Language, Par, Prefix, ReadPrefix, Relabel, Sum
from app.semantics import sos_r
from app.semantics.refusal import FULL, RefusalSet
from app.syntax.parser import parse_term
from app.syntax.printer import print_term
from app.transform.laws import LawId, apply_law
from tests.conftest import PRIORITY, SMALL_BOUND
from tests.generators import TermGenerator, all_refusals


def term(text):
    return parse_term(text)


# --- exploration ------------------------------------------------------------------------------


def test_reader_state_space(reader):
    lts = explore(reader)
    assert [lts.describe(i) for i in range(len(lts.states))] == ["a |> b.0", "0", "!a |> !b.0"]
    assert len(lts.edges) == 7
    assert not lts.truncated
    assert lts.time_edge(2).label.refusal == RefusalSet.all_but({"a", "b"})


def test_exploration_is_bounded():
    lts = explore(term("rec x. a.(x |[]| b.0)"), max_states=20)
    assert lts.truncated
    assert len(lts.states) == 20
    assert lts.frontier


def test_depth_bound():
    lts = explore(term("a.b.c.d.0"), max_depth=2, timed=False)
    assert lts.truncated
    assert len(lts.states) == 3


def test_untimed_exploration_has_no_time_edges(reader):
    assert all(not edge.label.is_time for edge in explore(reader, timed=False).edges)


def test_dot_output(reader):
    dot = explore(reader).to_dot()
    assert dot.startswith("digraph lts {")
    assert 's0 [shape=doublecircle, label="a |> b.0"]' in dot
    assert "style=dashed" in dot


def test_determinism():
    assert is_deterministic(explore(term("a.b.0 + b.0")))
    assert not is_deterministic(explore(term("a.b.0 + a.c.0")))
    assert not is_deterministic(explore(term("tau.a.0")))


# --- bisimulation -----------------------------------------------------------------------------


def test_interleaving_is_not_a_choice_of_orders():
    result = bisim(explore(term("a.0 |[]| b.0")), explore(term("a.b.0 + b.a.0")))
    assert result.verdict is Verdict.DISTINGUISHED
    assert result.witness["path"] == ["1", "a"]
    assert result.witness["refusal"] == "{b}"


def test_reading_differs_from_recursion_in_one_relation(reader, recursive_reader):
    result = bisim(explore(reader), explore(recursive_reader), BisimScheme.S)
    assert result.verdict is Verdict.DISTINGUISHED
    assert result.witness["path"] == ["1", "a"]


def test_reading_differs_from_recursion_in_two_relations(reader, recursive_reader):
    result = bisim(explore(reader), explore(recursive_reader), BisimScheme.R)
    assert result.verdict is Verdict.DISTINGUISHED
    assert result.witness["left_only"] == ["a?"]


def test_untimed_scheme_ignores_speed(reader, recursive_reader):
    left = explore(reader, timed=False)
    right = explore(recursive_reader, timed=False)
    assert bisim(left, right, BisimScheme.UNTIMED).verdict is Verdict.EQUIVALENT


def test_translated_read_set_matches_in_one_relation():
    left = explore(parse_term("{a,b} |> c.0", Language.S))
    right = explore(term("a |> b |> c.0"))
    assert bisim(left, right, BisimScheme.S).verdict is Verdict.EQUIVALENT


def test_truncation_downgrades_equivalence():
    looping = explore(term("rec x. a.(x |[]| b.0)"), max_states=30)
    assert bisim(looping, looping).verdict is Verdict.UNKNOWN


def test_result_document():
    document = bisim(explore(term("a.0")), explore(term("b.0"))).to_dict()
    assert document["verdict"] == "distinguished"
    assert document["witness"]["left_only"] == ["a"]
    assert document["witness"]["right_only"] == ["b"]


def _small_terms(rng, count):
    generator = TermGenerator(rng, names=("a", "b"))
    found = []
    while len(found) < count:
        lts = explore(generator.term(rng.randint(1, 3)), SMALL_BOUND)
        if not lts.truncated:
            found.append(lts)
    return found


def test_bisimilarity_is_an_equivalence(rng):
    for _ in range(100):
        first, second, third = _small_terms(rng, 3)
        assert bisim(first, first).verdict is Verdict.EQUIVALENT
        forward = bisim(first, second).verdict
        assert bisim(second, first).verdict is forward
        if forward is Verdict.EQUIVALENT and bisim(second, third).verdict is Verdict.EQUIVALENT:
            assert bisim(first, third).verdict is Verdict.EQUIVALENT


def _bounded_verdict(left, right):
    left_lts, right_lts = explore(left, SMALL_BOUND), explore(right, SMALL_BOUND)
    if left_lts.truncated or right_lts.truncated:
        return None
    return bisim(left_lts, right_lts).verdict


def _bisimilar_pairs(rng, generator, count):
    """Both sides of the read laws, which are bisimilar by construction."""
    pairs = []
    while len(pairs) < count:
        body = generator.term(rng.randint(1, 3))
        first, second = generator.action(), generator.action()
        law, left = rng.choice(
            [
                (LawId.L1, ReadPrefix(first, ReadPrefix(second, body))),
                (LawId.L2, ReadPrefix(first, ReadPrefix(first, body))),
                (LawId.L3, Sum(ReadPrefix(first, body), generator.term(2))),
            ]
        )
        right = apply_law(left, law)
        outcome = _bounded_verdict(left, right)
        if outcome is None:
            continue
        assert outcome is Verdict.EQUIVALENT, print_term(left)
        pairs.append((left, right))
    return pairs


def _contexts(rng, generator):
    other = generator.term(2)
    action = generator.action()
    sync = frozenset(name for name in generator.names if rng.random() < 0.5)
    relabelling = Relabelling.of({rng.choice(generator.names): rng.choice(generator.names + ("tau",))})
    return [
        lambda hole: Prefix(action, hole),
        lambda hole: ReadPrefix(action, hole),
        lambda hole: Sum(hole, other),
        lambda hole: Sum(other, hole),
        lambda hole: Par(hole, other, sync),
        lambda hole: Par(other, hole, sync),
        lambda hole: Relabel(hole, relabelling),
    ]


def test_bisimilarity_is_preserved_by_every_context(rng):
    generator = TermGenerator(rng, names=("a", "b"))
    for left, right in _bisimilar_pairs(rng, generator, 60):
        for context in _contexts(rng, generator):
            outcome = _bounded_verdict(context(left), context(right))
            assert outcome in (None, Verdict.EQUIVALENT), print_term(context(left))


def _every_move(term):
    """Action steps plus one time step for every refusal set that can be refused."""
    moves = set(sos_r.steps(term))
    for refused in all_refusals(("a", "b", "c")):
        successor = sos_r.can_refuse(term, refused)
        if successor is not None:
            moves.add((refused, successor))
    return moves


def _exhaustively_bisimilar(left, right):
    moves = {}

    def reachable(start):
        seen, queue = {start}, deque([start])
        while queue:
            state = queue.popleft()
            moves[state] = _every_move(state)
            for _, target in moves[state]:
                if target not in seen:
                    seen.add(target)
                    queue.append(target)
        return seen

    relation = set(product(reachable(left), reachable(right)))

    def answered(p, q):
        forth = all(
            any(label == reply and (target, answer) in relation for reply, answer in moves[q])
            for label, target in moves[p]
        )
        back = all(
            any(label == reply and (target, answer) in relation for label, target in moves[p])
            for reply, answer in moves[q]
        )
        return forth and back

    while True:
        failing = {pair for pair in relation if not answered(*pair)}
        if not failing:
            return (left, right) in relation
        relation -= failing


def test_maximal_refusal_labels_match_every_refusal(rng):
    generator = TermGenerator(rng, names=("a", "b"), urgency=0.3)
    checked = 0
    while checked < 100:
        first, second = generator.term(rng.randint(1, 3)), generator.term(rng.randint(1, 3))
        for left, right in ((first, second), (first, Sum(first, NIL)), (first, Sum(first, first))):
            left_lts, right_lts = explore(left, 30), explore(right, 30)
            if left_lts.truncated or right_lts.truncated:
                continue
            expected = Verdict.EQUIVALENT if _exhaustively_bisimilar(left, right) else Verdict.DISTINGUISHED
            assert bisim(left_lts, right_lts).verdict is expected, f"{print_term(left)} vs {print_term(right)}"
            checked += 1


# --- fairness ---------------------------------------------------------------------------------


def test_words():
    assert parse_word("aab") == ("a", "a", "b")
    assert parse_word("go, stop") == ("go", "stop")
    assert parse_word("") == ()
    assert format_word(("go", "stop")) == "go,stop"


def test_fair_words_of_the_reader(reader):
    assert fair_words_up_to(reader, 3) == [("b",), ("a", "b"), ("a", "a", "b")]


def test_reader_cannot_stop_after_a(reader):
    assert fair_member(reader, ("a",)) is Verdict.NO
    assert fair_member(reader, ("a", "a", "b")) is Verdict.YES


def test_recursive_reader_must_end_with_b(recursive_reader):
    assert fair_member(recursive_reader, ("a", "a", "a")) is Verdict.NO
    assert fair_member(recursive_reader, ("a", "b")) is Verdict.YES


def test_infinite_reading_is_fair_only_for_recursion(reader, recursive_reader):
    assert fair_lasso(recursive_reader, (), ("a",)) is Verdict.YES
    assert fair_lasso(reader, (), ("a",)) is Verdict.NO


def test_lasso_without_loop_is_a_finite_word(reader):
    lts = explore(reader)
    assert fair_lasso_lts(lts, ("b",), ()) is fair_member_lts(lts, ("b",))


def test_shortest_fair_lasso(reader, recursive_reader):
    assert find_fair_lasso(explore(recursive_reader), 4) == ((), ("a",))
    assert find_fair_lasso(explore(reader), 4) is None


def test_priority_blocks_b():
    words = {format_word(word) for word in fair_words_up_to(term(PRIORITY), 2)}
    assert "c" in words
    assert "bc" in words
    assert "b" not in words


def test_fairness_on_truncated_space_is_unknown():
    assert fair_member(term("rec x. a.(x |[]| b.0)"), ("c",), max_states=10) is Verdict.UNKNOWN


def _internal_reach(lts, start):
    seen = set(start)
    queue = deque(start)
    while queue:
        state = queue.popleft()
        for edge in lts.outgoing(state):
            if is_internal(edge.label) and edge.target not in seen:
                seen.add(edge.target)
                queue.append(edge.target)
    return seen


def _brute_force_fair(lts, word):
    """Some run reading `word` reaches a state that can cycle through a full time step forever."""
    cores = {
        edge.source
        for edge in lts.edges
        if edge.label.is_full_time and edge.source in _internal_reach(lts, {edge.target})
    }
    current = _internal_reach(lts, {lts.initial})
    for name in word:
        moved = {e.target for s in current for e in lts.outgoing(s) if visible_name(e.label) == name}
        current = _internal_reach(lts, moved)
    return any(_internal_reach(lts, {state}) & cores for state in current)


def test_fair_membership_agrees_with_brute_force(rng):
    generator = TermGenerator(rng, names=("a", "b"))
    checked = 0
    while checked < 100:
        lts = explore(generator.term(rng.randint(1, 4)), max_states=50)
        if lts.truncated:
            continue
        checked += 1
        for length in range(4):
            for word in product(("a", "b"), repeat=length):
                expected = Verdict.YES if _brute_force_fair(lts, word) else Verdict.NO
                assert fair_member_lts(lts, word) is expected


# --- refusal traces ---------------------------------------------------------------------------


def test_trace_syntax():
    assert parse_trace("1a1a") == (FULL, "a", FULL, "a")
    assert parse_trace("1 go {b} -{c}") == (
        FULL,
        "go",
        RefusalSet.finite({"b"}),
        RefusalSet.all_but({"c"}),
    )
    assert format_trace(parse_trace("1 go {b}")) == "1 go {b}"
    with pytest.raises(ParseError):
        parse_trace("1a?")


def test_idle_process_traces():
    assert [format_trace(trace) for trace in refusal_traces_up_to(term("0"), 2)] == ["", "1", "11"]


def test_recursion_can_wait_between_reads(reader, recursive_reader):
    waiting = parse_trace("1a1a")
    assert has_refusal_trace(recursive_reader, waiting) is Verdict.YES
    assert has_refusal_trace(reader, waiting) is Verdict.NO
    assert has_refusal_trace(reader, parse_trace("1a{c}a")) is Verdict.YES


def test_reading_is_faster(reader, recursive_reader):
    result = compare_refusal_traces(reader, recursive_reader, 4)
    assert result["verdict"] == "distinguished"
    assert result["left_included"]
    assert not result["right_included"]
    assert "1a1a" in result["right_only"]


def test_parallel_readers_keep_reading_fast():
    clients = "(a.0 |[]| a.0)"
    fast = term(f"(a |> b.0) |[a]| {clients}")
    slow = term(f"rec x. (a.x + b.0) |[a]| {clients}")
    assert has_refusal_trace(slow, parse_trace("1a1a")) is Verdict.YES
    assert has_refusal_trace(fast, parse_trace("1a1a")) is Verdict.NO


def test_equal_terms_have_equal_traces(reader):
    result = compare_refusal_traces(reader, reader, 3)
    assert result["verdict"] == "equivalent"
    assert result["left_only"] == result["right_only"] == []
