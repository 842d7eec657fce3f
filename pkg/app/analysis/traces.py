"""
Refusal traces: sequences of visible actions and refusal sets, tau abstracted.

Time steps are reported with their maximal refusal set. Any smaller set is a
refusal of the same step, so queries with arbitrary sets are answered by
inclusion in the maximal one.
"""

import logging
import re
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from app.analysis.lts import Lts, Verdict, explore, visible_name
from app.core.errors import ParseError
from app.core.terms import Term
from app.semantics.refusal import RefusalSet

logger = logging.getLogger(__name__)

TraceItem = Union[str, RefusalSet]
Trace = Tuple[TraceItem, ...]

_TOKEN = re.compile(r"-?\{[^}]*\}|1|[a-z_][A-Za-z0-9_]*")
_COMPACT_TOKEN = re.compile(r"-?\{[^}]*\}|1|[a-z]")


def parse_trace(text: str) -> Trace:
    """
    Read a refusal trace.

    Items are separated by spaces ("1 a {b} a"); without spaces every
    character is one item ("1a1a"). `1` is the full refusal set, `{a,b}` a
    finite one and `-{a}` everything but a.
    """
    text = text.strip()
    spaced = " " in text
    pattern = _TOKEN if spaced else _COMPACT_TOKEN
    items: List[TraceItem] = []
    position = 0
    while position < len(text):
        if text[position].isspace():
            position += 1
            continue
        match = pattern.match(text, position)
        if match is None:
            raise ParseError(f"unexpected {text[position]!r} at offset {position} of trace {text!r}")
        token = match.group(0)
        if token == "1" or token.endswith("}"):
            items.append(RefusalSet.parse(token))
        else:
            items.append(token)
        position = match.end()
    return tuple(items)


def format_trace(trace: Sequence[TraceItem]) -> str:
    compact = all(isinstance(item, RefusalSet) or len(item) == 1 for item in trace)
    return ("" if compact else " ").join(str(item) for item in trace)


def _tau_closure(lts: Lts, states: Set[int]) -> FrozenSet[int]:
    stack = list(states)
    seen = set(states)
    while stack:
        state = stack.pop()
        for edge in lts.outgoing(state):
            if edge.label.is_tau and edge.target not in seen:
                seen.add(edge.target)
                stack.append(edge.target)
    return frozenset(seen)


def _after_item(lts: Lts, states: FrozenSet[int], item: TraceItem) -> FrozenSet[int]:
    moved: Set[int] = set()
    for state in states:
        if isinstance(item, RefusalSet):
            edge = lts.time_edge(state)
            if edge is not None and item <= edge.label.refusal:
                moved.add(edge.target)
        else:
            moved.update(edge.target for edge in lts.outgoing(state) if visible_name(edge.label) == item)
    return _tau_closure(lts, moved)


def has_refusal_trace_lts(lts: Lts, trace: Sequence[TraceItem]) -> Verdict:
    current = _tau_closure(lts, {lts.initial})
    for item in trace:
        current = _after_item(lts, current, item)
        if not current:
            return Verdict.UNKNOWN if lts.truncated else Verdict.NO
    return Verdict.YES


def has_refusal_trace(
    term: Term, trace: Sequence[TraceItem], max_states: Optional[int] = None, max_depth: Optional[int] = None
) -> Verdict:
    verdict = has_refusal_trace_lts(explore(term, max_states, max_depth), trace)
    logger.info(f"Refusal trace {format_trace(trace) or '<empty>'}: {verdict.value}")
    return verdict


def refusal_traces_lts(lts: Lts, max_len: int) -> List[Trace]:
    """All refusal traces of length at most `max_len`, time steps shown with maximal refusal sets."""
    traces: List[Trace] = []
    layer: List[Tuple[Trace, FrozenSet[int]]] = [((), _tau_closure(lts, {lts.initial}))]
    for length in range(max_len + 1):
        following: List[Tuple[Trace, FrozenSet[int]]] = []
        for trace, states in layer:
            traces.append(trace)
            if length == max_len:
                continue
            names = sorted(
                {visible_name(e.label) for s in states for e in lts.outgoing(s) if visible_name(e.label) is not None}
            )
            for name in names:
                following.append((trace + (name,), _after_item(lts, states, name)))
            refusals: Dict[RefusalSet, Set[int]] = {}
            for state in states:
                edge = lts.time_edge(state)
                if edge is not None:
                    refusals.setdefault(edge.label.refusal, set()).add(state)
            for refusal in sorted(refusals, key=str):
                following.append((trace + (refusal,), _after_item(lts, states, refusal)))
        layer = following
    return traces


def refusal_traces_up_to(
    term: Term, max_len: int, max_states: Optional[int] = None, max_depth: Optional[int] = None
) -> List[Trace]:
    lts = explore(term, max_states, max_depth)
    traces = refusal_traces_lts(lts, max_len)
    if lts.truncated:
        logger.warning("Refusal traces computed on a truncated state space may be incomplete")
    return traces


def compare_refusal_traces(
    left: Term, right: Term, max_len: int, max_states: Optional[int] = None, max_depth: Optional[int] = None
) -> Dict[str, Any]:
    """
    Bounded refusal traces of one side that the other lacks.

    A side whose traces are all traces of the other is at least as fast as
    the other up to `max_len`.
    """
    left_lts = explore(left, max_states, max_depth)
    right_lts = explore(right, max_states, max_depth)
    left_only = [
        t for t in refusal_traces_lts(left_lts, max_len) if has_refusal_trace_lts(right_lts, t) is Verdict.NO
    ]
    right_only = [
        t for t in refusal_traces_lts(right_lts, max_len) if has_refusal_trace_lts(left_lts, t) is Verdict.NO
    ]
    truncated = left_lts.truncated or right_lts.truncated
    if left_only or right_only:
        verdict = Verdict.DISTINGUISHED
    else:
        verdict = Verdict.UNKNOWN if truncated else Verdict.EQUIVALENT
    logger.info(f"Refusal traces up to length {max_len}: {verdict.value}")
    return {
        "verdict": verdict.value,
        "max_len": max_len,
        "left_only": [format_trace(t) for t in left_only],
        "right_only": [format_trace(t) for t in right_only],
        "left_included": not left_only,
        "right_included": not right_only,
        "truncated": truncated,
    }
