"""
Bounded state-space exploration.

States are keyed by syntactic identity; the exploration is breadth-first and
stops creating new states once `max_states` states exist or a successor would
lie deeper than `max_depth`. Every state that lost a successor that way is
recorded in `frontier` and the whole LTS is flagged `truncated`, which
downgrades every verdict computed on it.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Set, Tuple

from app.core.actions import Action
from app.core.config import get_settings
from app.core.terms import Language, Term, language_of
from app.semantics import sos_r, sos_s
from app.semantics.labels import StepKind, StepLabel
from app.syntax.printer import print_term
from app.transform.petri import ReadArcNet, net_steps

logger = logging.getLogger(__name__)

Successors = Callable[[Hashable], Iterable[Tuple[StepLabel, Hashable]]]


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    EQUIVALENT = "equivalent"
    DISTINGUISHED = "distinguished"
    UNKNOWN = "bounded-unknown"


@dataclass(frozen=True)
class Edge:
    source: int
    label: StepLabel
    target: int


@dataclass
class Lts:
    states: List[Hashable] = field(default_factory=list)
    index: Dict[Hashable, int] = field(default_factory=dict)
    edges: List[Edge] = field(default_factory=list)
    initial: int = 0
    truncated: bool = False
    frontier: Set[int] = field(default_factory=set)
    language: Optional[Language] = None

    def add_state(self, state: Hashable) -> int:
        self.index[state] = len(self.states)
        self.states.append(state)
        return self.index[state]

    @cached_property
    def _adjacency(self) -> Dict[int, List[Edge]]:
        table: Dict[int, List[Edge]] = {i: [] for i in range(len(self.states))}
        for edge in self.edges:
            table[edge.source].append(edge)
        return table

    def outgoing(self, state: int) -> List[Edge]:
        return self._adjacency[state]

    def time_edge(self, state: int) -> Optional[Edge]:
        for edge in self.outgoing(state):
            if edge.label.is_time:
                return edge
        return None

    def describe(self, state: int) -> str:
        value = self.states[state]
        if isinstance(value, frozenset):
            return "{" + ",".join(sorted(value)) + "}"
        return print_term(value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "initial": self.initial,
            "truncated": self.truncated,
            "states": [{"id": i, "term": self.describe(i)} for i in range(len(self.states))],
            "edges": [
                {"source": edge.source, "target": edge.target, "label": edge.label.to_dict()} for edge in self.edges
            ],
        }

    def to_dot(self) -> str:
        lines = ["digraph lts {", "  rankdir=LR;"]
        for i in range(len(self.states)):
            shape = "doublecircle" if i == self.initial else "circle"
            text = self.describe(i).replace('"', '\\"')
            lines.append(f'  s{i} [shape={shape}, label="{text}"];')
        for edge in self.edges:
            style = ", style=dashed" if edge.label.is_time else ""
            lines.append(f'  s{edge.source} -> s{edge.target} [label="{edge.label}"{style}];')
        lines.append("}")
        return "\n".join(lines)


def _step_order(item: Tuple[StepLabel, Term]):
    label, successor = item
    return label.kind.value, label.action.name, print_term(successor)


def term_successors(language: Language, timed: bool = True) -> Successors:
    """All labelled successors of a term: action steps plus the maximal time step."""
    if language is Language.S:
        action_steps, max_refusal = sos_s.steps_s, sos_s.max_refusal_s
    else:
        action_steps, max_refusal = sos_r.steps, sos_r.max_refusal

    def successors(term: Term) -> List[Tuple[StepLabel, Term]]:
        result = sorted(action_steps(term), key=_step_order)
        if timed:
            step = max_refusal(term)
            if step is not None:
                result.append((StepLabel.time(step[0]), step[1]))
        return result

    return successors


def build(
    initial: Hashable,
    successors: Successors,
    max_states: Optional[int] = None,
    max_depth: Optional[int] = None,
    language: Optional[Language] = None,
) -> Lts:
    settings = get_settings()
    max_states = max_states or settings.max_states
    max_depth = max_depth or settings.max_depth

    lts = Lts(language=language)
    lts.add_state(initial)
    depth = {0: 0}
    seen_edges: Set[Tuple[int, StepLabel, int]] = set()
    queue = deque([0])
    while queue:
        source = queue.popleft()
        for label, successor in successors(lts.states[source]):
            target = lts.index.get(successor)
            if target is None:
                if len(lts.states) >= max_states or depth[source] + 1 > max_depth:
                    lts.frontier.add(source)
                    lts.truncated = True
                    continue
                target = lts.add_state(successor)
                depth[target] = depth[source] + 1
                queue.append(target)
            key = (source, label, target)
            if key not in seen_edges:
                seen_edges.add(key)
                lts.edges.append(Edge(source, label, target))
    if lts.truncated:
        logger.warning(f"Exploration truncated at {len(lts.states)} states ({len(lts.frontier)} frontier states)")
    else:
        logger.debug(f"Explored {len(lts.states)} states and {len(lts.edges)} edges")
    return lts


def explore(
    term: Term,
    max_states: Optional[int] = None,
    max_depth: Optional[int] = None,
    language: Optional[Language] = None,
    timed: bool = True,
) -> Lts:
    language = language or language_of(term)
    return build(term, term_successors(language, timed), max_states, max_depth, language)


def net_lts(net: ReadArcNet, max_states: Optional[int] = None, max_depth: Optional[int] = None) -> Lts:
    """Marking graph of a read-arc net; labels are the transitions' labels."""

    def successors(marking: FrozenSet[str]):
        steps = sorted(net_steps(net, marking), key=lambda item: (item[0], sorted(item[1])))
        return [(StepLabel.act(Action(label)), target) for label, target in steps]

    return build(net.initial_marking, successors, max_states, max_depth)


def action_edges(lts: Lts) -> Iterable[Edge]:
    return (edge for edge in lts.edges if not edge.label.is_time)


def is_deterministic(lts: Lts) -> bool:
    """No tau and no visible action leading to two different states (reads and ordinary steps pooled)."""
    targets: Dict[Tuple[int, str], Set[int]] = {}
    for edge in action_edges(lts):
        if edge.label.is_tau:
            return False
        bucket = targets.setdefault((edge.source, edge.label.action.name), set())
        bucket.add(edge.target)
        if len(bucket) > 1:
            return False
    return True


def is_internal(label: StepLabel) -> bool:
    """Edges invisible to an observer of action sequences: tau steps and time steps."""
    return label.is_time or label.is_tau


def visible_name(label: StepLabel) -> Optional[str]:
    if label.kind is StepKind.TIME or label.is_tau:
        return None
    return label.action.name
