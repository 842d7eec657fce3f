"""
Executable worked examples.

Every check reproduces one published example of the two read algebras (the
boolean array, the priority term, the speed-up of reading, the fairness
separation, the improper read-set terms, the net place, the failed choice
laws) and reports whether the workbench computes the documented answer.
"""

import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from app.analysis.bisim import BisimScheme, bisim
from app.analysis.fairness import fair_member, fair_words_lts, find_fair_lasso, format_word
from app.analysis.lts import Verdict, explore, is_deterministic, net_lts
from app.analysis.traces import has_refusal_trace, parse_trace
from app.core.actions import Action
from app.core.errors import WorkbenchError
from app.core.predicates import is_guarded, is_proper, is_rnf, proper_violation, sort
from app.core.terms import Language, substitute
from app.semantics import sos_r, sos_s
from app.semantics.labels import StepKind
from app.semantics.refusal import EMPTY, FULL
from app.syntax.parser import parse_term
from app.syntax.printer import print_term
from app.transform.laws import LawId, apply_law
from app.transform.normalize import normalize_to_rnf
from app.transform.petri import (
    ArcSpec,
    NetDocument,
    PlaceSpec,
    ReadArcSpec,
    TransitionSpec,
    build_net,
    petri_to_s,
    place_equations,
)
from app.transform.translate import merge_read_actions, r_to_s, s_to_r

logger = logging.getLogger(__name__)

Outcome = Tuple[bool, str]

BOOLEAN_ARRAY_EQUATIONS = """
Pt <= rtt |> r1t |> w1f.Pf + rtf |> r1t |> w1f.Pf
Pf <= rft |> r1f |> w1t.Pt + rff |> r1f |> w1t.Pt
Qf <= rtf |> r2f |> w2t.Qt + rff |> r2f |> w2t.Qt
Qt <= rtt |> r2t |> w2f.Qf + rft |> r2t |> w2f.Qf
"""
B_TF = BOOLEAN_ARRAY_EQUATIONS + "main = Pt |[rtt,rtf,rft,rff]| Qf"
B_FF = BOOLEAN_ARRAY_EQUATIONS + "main = Pf |[rtt,rtf,rft,rff]| Qf"

READER = "a |> b.0"
RECURSIVE_READER = "rec x. (a.x + b.0)"
PRIORITY = "a |> (rec x. b.x |[b]| b |> c.0)"
PRIORITY_AFTER_ONE_STEP = "!a |> (!b.rec x. b.x |[b]| !b |> !c.0)"
FAIRNESS_CANDIDATES = ("rec x. (a.x + b.0)", "a.b.0", "rec x. a.x + b.0")


@dataclass(frozen=True)
class ReferenceCheck:
    name: str
    source: str
    run: Callable[[], Outcome]


CHECKS: List[ReferenceCheck] = []


def _check(name: str, source: str):
    def register(function: Callable[[], Outcome]) -> Callable[[], Outcome]:
        CHECKS.append(ReferenceCheck(name, source, function))
        return function

    return register


def _equivalent(left, right, scheme: BisimScheme = BisimScheme.R) -> bool:
    return bisim(explore(left), explore(right), scheme).verdict is Verdict.EQUIVALENT


def _steps(term, kind: StepKind, name: str) -> list:
    return [target for label, target in sos_r.steps(term) if label.kind is kind and label.action.name == name]


@_check("sort-of-reader", "process a |> b.nil")
def _sort_of_reader() -> Outcome:
    found = sort(parse_term(READER))
    return found == {"a", "b"}, f"sort {sorted(found)}"


@_check("guarded-improper-term", "rec x. {a} |> b.(c + x) is guarded")
def _guarded_improper_term() -> Outcome:
    body = parse_term("{a} |> b.(c.0 + x)", Language.S, allow_open=True)
    return is_guarded("x", body), "x occurs below the prefix b"


@_check("unfolding-substitution", "rec x. a |> b.x unfolds under its read")
def _unfolding_substitution() -> Outcome:
    body = parse_term("a |> b.x", allow_open=True)
    result = print_term(substitute(body, "x", parse_term("rec x. a |> b.x")))
    return result == "a |> b.rec x. a |> b.x", result


@_check("boolean-array-reads", "B_tf reads r_tf and r1_t without changing state")
def _boolean_array_reads() -> Outcome:
    array = parse_term(B_TF)
    failures = []
    for name in ("rtf", "r1t"):
        targets = _steps(array, StepKind.READ, name)
        if not targets or not all(_equivalent(target, array) for target in targets):
            failures.append(name)
    if _steps(array, StepKind.READ, "rtt"):
        failures.append("rtt must be blocked by synchronisation")
    return not failures, "reads are self-loops" if not failures else f"failed: {', '.join(failures)}"


@_check("boolean-array-write", "B_tf performs w1_f as an ordinary action and becomes B_ff")
def _boolean_array_write() -> Outcome:
    targets = _steps(parse_term(B_TF), StepKind.ORDINARY, "w1f")
    expected = parse_term(B_FF)
    ok = len(targets) == 1 and _equivalent(targets[0], expected)
    return ok, f"{len(targets)} w1f successors"


@_check("urgent-prefix", "!a.P performs a and becomes P")
def _urgent_prefix() -> Outcome:
    found = sos_r.ordinary_steps(parse_term("!a.0"))
    rendered = sorted(f"{action}->{print_term(target)}" for action, target in found)
    return rendered == ["a->0"], ", ".join(rendered)


@_check("read-unfolding", "rec x. a |> b.x reads a into a |> b.(rec x. a |> b.x)")
def _read_unfolding() -> Outcome:
    found = sos_r.read_steps(parse_term("rec x. a |> b.x"))
    rendered = sorted(f"{action}->{print_term(target)}" for action, target in found)
    return rendered == ["a->a |> b.rec x. a |> b.x"], ", ".join(rendered)


@_check("urgent-tau-stops-time", "!tau.P cannot let time pass")
def _urgent_tau() -> Outcome:
    return sos_r.can_refuse(parse_term("!tau.0"), EMPTY) is None, "no time step"


@_check("reader-one-step", "after a 1-step a |> b becomes !a |> !b, and no further 1-step exists")
def _reader_one_step() -> Outcome:
    step = sos_r.max_refusal(parse_term(READER))
    if step is None or not step[0].is_full:
        return False, "no full time step"
    after = print_term(step[1])
    again = sos_r.can_refuse(step[1], FULL)
    return after == "!a |> !b.0" and again is None, after


@_check("priority-one-step", "the three-level priority term after a 1-step")
def _priority_one_step() -> Outcome:
    successor = sos_r.one_step(parse_term(PRIORITY))
    printed = print_term(successor) if successor is not None else "<none>"
    return printed == PRIORITY_AFTER_ONE_STEP, printed


@_check("read-speedup-traces", "rec x.(a.x + b) has the refusal trace 1a1a, a |> b does not")
def _read_speedup() -> Outcome:
    trace = parse_trace("1a1a")
    slow = has_refusal_trace(parse_term(RECURSIVE_READER), trace)
    fast = has_refusal_trace(parse_term(READER), trace)
    return slow is Verdict.YES and fast is Verdict.NO, f"recursive: {slow.value}, reader: {fast.value}"


@_check("parallel-readers", "two parallel readers are served within one time unit by a |> b only")
def _parallel_readers() -> Outcome:
    trace = parse_trace("1a1a")
    clients = "(a.0 |[]| a.0)"
    slow = has_refusal_trace(parse_term(f"{RECURSIVE_READER} |[a]| {clients}"), trace)
    fast = has_refusal_trace(parse_term(f"({READER}) |[a]| {clients}"), trace)
    return slow is Verdict.YES and fast is Verdict.NO, f"recursive: {slow.value}, reader: {fast.value}"


@_check("read-vs-recursion-bisim", "a |> b and rec x.(a.x + b) are distinguished by 1a")
def _read_vs_recursion() -> Outcome:
    result = bisim(explore(parse_term(READER)), explore(parse_term(RECURSIVE_READER)), BisimScheme.S)
    path = result.witness["path"] if result.witness else []
    return result.verdict is Verdict.DISTINGUISHED and path[:2] == ["1", "a"], f"witness {path}"


def _reader_language(max_len: int) -> set:
    return {("a",) * i + ("b",) for i in range(max_len)}


@_check("reader-fair-language", "the fair traces of a |> b are exactly a^i b")
def _reader_fair_language() -> Outcome:
    words = set(fair_words_lts(explore(parse_term(READER)), 10))
    expected = _reader_language(10)
    return words == expected, f"{len(words)} fair words up to length 10"


def fair_language_witness(text: str, max_len: int = 10) -> Optional[str]:
    """A trace showing that the fair language of `text` differs from that of a |> b."""
    lts = explore(parse_term(text))
    words = set(fair_words_lts(lts, max_len))
    expected = _reader_language(max_len)
    different = sorted(words ^ expected, key=lambda word: (len(word), word))
    if different:
        word = different[0]
        return f"{format_word(word) or '<empty>'} ({'fair' if word in words else 'not fair'})"
    lasso = find_fair_lasso(lts, 4)
    if lasso is not None:
        prefix, loop = lasso
        return f"{format_word(prefix)}({format_word(loop)})^omega (fair)"
    return None


@_check("read-free-fairness", "no read-free finite-state process over {a,b} has the fair traces of a |> b")
def _read_free_fairness() -> Outcome:
    witnesses = {text: fair_language_witness(text) for text in FAIRNESS_CANDIDATES}
    ok = all(witness is not None for witness in witnesses.values())
    return ok, "; ".join(f"{text}: {witness}" for text, witness in witnesses.items())


@_check("reader-fair-members", "aab is a fair trace of a |> b, aa is not")
def _reader_fair_members() -> Outcome:
    term = parse_term(READER)
    yes, no = fair_member(term, "aab"), fair_member(term, "aa")
    return yes is Verdict.YES and no is Verdict.NO, f"aab: {yes.value}, aa: {no.value}"


@_check("priority-fairness", "in a fair trace of the priority term c is finally performed")
def _priority_fairness() -> Outcome:
    words = {format_word(word) for word in fair_words_lts(explore(parse_term(PRIORITY)), 2)}
    return {"c", "bc"} <= words and "b" not in words, ", ".join(sorted(words))


@_check("improper-read-sets", "nested read sets and read sets over choices with a variable are improper")
def _improper_read_sets() -> Outcome:
    samples = (
        "{a} |> {b} |> c.0",
        "rec x. {a} |> b.(c.0 + x)",
        "rec x. {a} |> b.rec y. (c.(c.0 + y) |[]| x)",
    )
    proper = [text for text in samples if is_proper(parse_term(text, Language.S))]
    return not proper, "all improper" if not proper else f"accepted: {proper}"


@_check("read-set-steps", "{a,b} |> c reads a and b; {a} |> {b} |> Q moves on b to {b} |> Q")
def _read_set_steps() -> Outcome:
    simple = parse_term("{a,b} |> c.0", Language.S)
    found = {(action.name, print_term(target)) for action, target in sos_s.action_steps_s(simple)}
    expected = {("a", "{a,b} |> c.0"), ("b", "{a,b} |> c.0"), ("c", "0")}
    nested = parse_term("{a} |> {b} |> c.0", Language.S)
    on_b = {print_term(target) for action, target in sos_s.action_steps_s(nested) if action.name == "b"}
    return found == expected and on_b == {"{b} |> c.0"}, f"{sorted(found)}; b leads to {sorted(on_b)}"


@_check("rnf-examples", "(a |> b) + c is not in read normal form, a |> (b + c) is")
def _rnf_examples() -> Outcome:
    outside, inside = parse_term("a |> b.0 + c.0"), parse_term("a |> (b.0 + c.0)")
    return not is_rnf(outside) and is_rnf(inside), "as documented"


@_check("choice-law", "(a |> b) + c rewrites into a |> (b + c) with the same timed behaviour")
def _choice_law() -> Outcome:
    source = parse_term("a |> b.0 + c.0")
    result = apply_law(source, LawId.L3)
    return print_term(result) == "a |> (b.0 + c.0)" and _equivalent(source, result), print_term(result)


@_check("translations", "{a,b} |> c and a |> b |> c translate into each other; urgent copies win")
def _translations() -> Outcome:
    forward = print_term(s_to_r(parse_term("{a,b} |> c.0", Language.S)))
    backward = print_term(r_to_s(parse_term("a |> b |> c.0")))
    merged = merge_read_actions([Action("a"), Action("a", urgent=True)])
    ok = forward == "a |> b |> c.0" and backward == "{a,b} |> c.0" and merged == {Action("a", urgent=True)}
    return ok, f"{forward}; {backward}"


@_check("rnf-translation-bisim", "an RNF term and its read-set translation are timed bisimilar")
def _rnf_translation() -> Outcome:
    term = parse_term("a |> b |> (rec x. c.d.x |[]| e.0)")
    if not is_rnf(term):
        return False, "sample left read normal form"
    return _equivalent(term, r_to_s(term), BisimScheme.S), print_term(r_to_s(term))


@_check("read-over-parallel", "a read over a parallel composition is distributed with a fresh action")
def _read_over_parallel() -> Outcome:
    source = parse_term("a |> (b.0 |[]| c.0)")
    result = normalize_to_rnf(source)
    return is_rnf(result) and _equivalent(source, result), print_term(result)


def _worked_place_net():
    return build_net(
        NetDocument(
            places=[PlaceSpec(name="p"), PlaceSpec(name="q", marked=True)],
            transitions=[TransitionSpec(name=f"t{i}") for i in range(1, 7)],
            arcs=[
                ArcSpec(source="q", target="t1"),
                ArcSpec(source="q", target="t2"),
                ArcSpec(source="t1", target="p"),
                ArcSpec(source="t2", target="p"),
                ArcSpec(source="p", target="t3"),
                ArcSpec(source="p", target="t4"),
                ArcSpec(source="t3", target="q"),
                ArcSpec(source="t4", target="q"),
            ],
            read_arcs=[ReadArcSpec(place="p", transition="t5"), ReadArcSpec(place="p", transition="t6")],
        )
    )


@_check("net-place", "a place with two producers, two consumers and two readers")
def _net_place() -> Outcome:
    net = _worked_place_net()
    equations = {name: print_term(body) for name, body in place_equations(net, "p").items()}
    expected = {"E_p": "t1.M_p + t2.M_p", "M_p": "{t5,t6} |> (t3.E_p + t4.E_p)"}
    term = petri_to_s(net)
    untimed = bisim(net_lts(net), explore(term, timed=False), BisimScheme.UNTIMED)
    ok = equations == expected and is_proper(term) and untimed.verdict is Verdict.EQUIVALENT
    return ok, f"{equations}; untimed {untimed.verdict.value}"


@_check("nondeterministic-choice", "a.b + a.c breaks the choice expansion into a deadlock")
def _nondeterministic_choice() -> Outcome:
    choice = parse_term("a.b.0 + a.c.0")
    if is_deterministic(explore(choice)):
        return False, "a.b + a.c reported deterministic"
    original = parse_term("a.b.0 + a.c.0 + (d.0 |[]| e.0)")
    expanded = parse_term("(a.b.0 + a.c.0 + d.0) |[a,b,c]| (a.b.0 + a.c.0 + e.0)")
    result = bisim(explore(original), explore(expanded), BisimScheme.R)
    witness = result.witness or {}
    deadlocked = witness.get("right_state") in {"b.0 |[a,b,c]| c.0", "c.0 |[a,b,c]| b.0"}
    return result.verdict is Verdict.DISTINGUISHED and deadlocked, f"witness {witness.get('path')}"


@_check("no-expansion-law", "a || b and a.b + b.a differ by the partial time step {b}")
def _no_expansion_law() -> Outcome:
    result = bisim(explore(parse_term("a.0 |[]| b.0")), explore(parse_term("a.b.0 + b.a.0")), BisimScheme.R)
    witness = result.witness or {}
    ok = result.verdict is Verdict.DISTINGUISHED and witness.get("refusal") == "{b}"
    return ok, f"witness {witness.get('path')} refusal {witness.get('refusal')}"


@_check("improper-diagnostics", "the offending subterm of {a} |> {b} |> c is reported")
def _improper_diagnostics() -> Outcome:
    violation = proper_violation(parse_term("{a} |> {b} |> c.0", Language.S))
    return violation is not None and violation.path == (), violation.describe() if violation else "no violation"


def run_suite(names: Optional[List[str]] = None) -> Dict[str, Any]:
    """
    Run the worked examples.

    Args:
        names: restrict the run to these checks; None runs every check

    Returns:
        dict: per-check outcome plus totals; `verdict` is "yes" when all passed
    """
    started = time.perf_counter()
    results = []
    for check in CHECKS:
        if names and check.name not in names:
            continue
        try:
            passed, detail = check.run()
        except WorkbenchError as error:
            passed, detail = False, f"{error.kind}: {error.message}"
        results.append({"name": check.name, "source": check.source, "passed": passed, "detail": detail})
        if not passed:
            logger.warning(f"Reference check {check.name} failed: {detail}")
    failed = sum(1 for result in results if not result["passed"])
    elapsed = time.perf_counter() - started
    logger.info(f"Ran {len(results)} reference checks in {elapsed:.2f}s, {failed} failed")
    return {
        "verdict": (Verdict.NO if failed else Verdict.YES).value,
        "passed": len(results) - failed,
        "failed": failed,
        "seconds": round(elapsed, 3),
        "checks": results,
    }
