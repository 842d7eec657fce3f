"""
Safe Petri nets with read arcs and their translation into read-set terms.

Each place becomes a two-state process: empty, it offers every transition
that fills it; marked, it lets its readers read and offers every transition
that empties it. The place processes run in parallel, synchronising on the
transitions they share, and a final relabelling turns transition ids into
their labels.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from lark import Tree
from lark.exceptions import UnexpectedInput
from pydantic import BaseModel, Field, ValidationError

from app.core.actions import TAU, Action, is_action_name
from app.core.config import get_settings
from app.core.errors import NetFormatError, NotSafe
from app.core.relabelling import Relabelling
from app.core.terms import NIL, Par, Prefix, ReadSet, Rec, Relabel, Sum, Term, Var
from app.syntax.grammar import net_parser
from app.syntax.parser import desugar

logger = logging.getLogger(__name__)

Marking = FrozenSet[str]


class PlaceSpec(BaseModel):
    name: str
    marked: bool = False


class TransitionSpec(BaseModel):
    name: str
    label: Optional[str] = Field(None, description="Action label; defaults to the transition name")


class ArcSpec(BaseModel):
    source: str
    target: str


class ReadArcSpec(BaseModel):
    place: str
    transition: str


class NetDocument(BaseModel):
    """JSON form of a net file; the text format carries the same fields."""

    places: List[PlaceSpec]
    transitions: List[TransitionSpec]
    arcs: List[ArcSpec] = []
    read_arcs: List[ReadArcSpec] = []


@dataclass(frozen=True)
class ReadArcNet:
    places: Tuple[str, ...]
    labels: Dict[str, str]
    pre: Dict[str, FrozenSet[str]]
    post: Dict[str, FrozenSet[str]]
    reads: Dict[str, FrozenSet[str]]
    initial_marking: Marking

    @property
    def transitions(self) -> Tuple[str, ...]:
        return tuple(sorted(self.labels))

    def producers(self, place: str) -> List[str]:
        return [t for t in self.transitions if place in self.post[t]]

    def consumers(self, place: str) -> List[str]:
        return [t for t in self.transitions if place in self.pre[t]]

    def readers(self, place: str) -> List[str]:
        return [t for t in self.transitions if place in self.reads[t]]

    def neighbourhood(self, place: str) -> FrozenSet[str]:
        return frozenset(self.producers(place) + self.consumers(place) + self.readers(place))

    def isolated(self) -> List[str]:
        return [t for t in self.transitions if not (self.pre[t] or self.post[t] or self.reads[t])]


def build_net(document: NetDocument) -> ReadArcNet:
    """Validate a net document and index its arcs."""
    places = [place.name for place in document.places]
    if len(set(places)) != len(places):
        raise NetFormatError("duplicate place name")
    labels: Dict[str, str] = {}
    for transition in document.transitions:
        if transition.name in labels:
            raise NetFormatError(f"duplicate transition {transition.name}")
        if not is_action_name(transition.name):
            raise NetFormatError(f"transition id {transition.name!r} is not a valid action name")
        label = transition.label or transition.name
        if label != TAU and not is_action_name(label):
            raise NetFormatError(f"label {label!r} of {transition.name} is not an action")
        labels[transition.name] = label
    if set(places) & set(labels):
        raise NetFormatError("places and transitions must have distinct names")

    pre: Dict[str, Set[str]] = {t: set() for t in labels}
    post: Dict[str, Set[str]] = {t: set() for t in labels}
    reads: Dict[str, Set[str]] = {t: set() for t in labels}
    for arc in document.arcs:
        if arc.source in places and arc.target in labels:
            pre[arc.target].add(arc.source)
        elif arc.source in labels and arc.target in places:
            post[arc.source].add(arc.target)
        else:
            raise NetFormatError(f"arc {arc.source}->{arc.target} must join a place and a transition")
    for arc in document.read_arcs:
        if arc.place not in places or arc.transition not in labels:
            raise NetFormatError(f"read arc {arc.place}--{arc.transition} must join a place and a transition")
        if arc.place in pre[arc.transition] or arc.place in post[arc.transition]:
            raise NetFormatError(f"read arc {arc.place}--{arc.transition} duplicates a flow arc")
        reads[arc.transition].add(arc.place)

    def freeze(table: Dict[str, Set[str]]) -> Dict[str, FrozenSet[str]]:
        return {key: frozenset(value) for key, value in table.items()}

    return ReadArcNet(
        places=tuple(places),
        labels=labels,
        pre=freeze(pre),
        post=freeze(post),
        reads=freeze(reads),
        initial_marking=frozenset(place.name for place in document.places if place.marked),
    )


def _document_from_text(text: str) -> NetDocument:
    try:
        tree = net_parser.parse(text)
    except UnexpectedInput as error:
        raise NetFormatError(
            "malformed net file", line=getattr(error, "line", None), column=getattr(error, "column", None)
        ) from None
    places, transitions, arcs, read_arcs = [], [], [], []
    for item in tree.children:
        if not isinstance(item, Tree):
            continue
        values = [token.value for token in item.children]
        if item.data == "place":
            places.append(PlaceSpec(name=values[0], marked=len(values) > 1))
        elif item.data == "transition":
            transitions.append(TransitionSpec(name=values[0], label=values[1] if len(values) > 1 else None))
        elif item.data == "flow":
            arcs.append(ArcSpec(source=values[0], target=values[1]))
        else:
            read_arcs.append(ReadArcSpec(place=values[0], transition=values[1]))
    return NetDocument(places=places, transitions=transitions, arcs=arcs, read_arcs=read_arcs)


def load_net(text: str) -> ReadArcNet:
    """Read a net in the line-based text format or as JSON (detected by a leading brace)."""
    if text.lstrip().startswith("{"):
        try:
            document = NetDocument.model_validate(json.loads(text))
        except (ValueError, ValidationError) as error:
            raise NetFormatError(f"invalid JSON net: {error}") from None
    else:
        document = _document_from_text(text)
    return build_net(document)


def net_steps(net: ReadArcNet, marking: Marking) -> Set[Tuple[str, Marking]]:
    """Firings enabled in `marking`; read places are tested but keep their token."""
    result = set()
    for transition in net.transitions:
        if net.pre[transition] | net.reads[transition] <= marking:
            target = (marking - net.pre[transition]) | net.post[transition]
            result.add((net.labels[transition], target))
    return result


def check_safe(net: ReadArcNet, max_states: Optional[int] = None) -> int:
    """
    Explore the marking graph and fail on the first firing that would put a
    second token on a place. Returns the number of reachable markings.
    """
    max_states = max_states or get_settings().max_states
    seen = {net.initial_marking}
    queue = deque([net.initial_marking])
    while queue:
        marking = queue.popleft()
        for transition in net.transitions:
            pre, post = net.pre[transition], net.post[transition]
            if not (pre | net.reads[transition]) <= marking:
                continue
            overflow = (marking - pre) & post
            if overflow:
                raise NotSafe(
                    f"firing {transition} puts a second token on {', '.join(sorted(overflow))}",
                    marking=sorted(marking),
                )
            target = (marking - pre) | post
            if target not in seen:
                if len(seen) >= max_states:
                    logger.warning(f"Safety check stopped after {len(seen)} markings")
                    return len(seen)
                seen.add(target)
                queue.append(target)
    return len(seen)


def _choice(terms: List[Term]) -> Term:
    if not terms:
        return NIL
    result = terms[0]
    for term in terms[1:]:
        result = Sum(result, term)
    return result


def place_equations(net: ReadArcNet, place: str) -> Dict[str, Term]:
    """The empty and marked state of one place as an equation pair."""
    empty, marked = f"E_{place}", f"M_{place}"
    consumers = net.consumers(place)
    fill = [Prefix(Action(t), Var(marked)) for t in net.producers(place) if t not in consumers]
    drain = [Prefix(Action(t), Var(marked) if place in net.post[t] else Var(empty)) for t in consumers]
    readers = net.readers(place)
    body = _choice(drain)
    if readers:
        body = ReadSet(frozenset(Action(t) for t in readers), body)
    return {empty: _choice(fill), marked: body}


def petri_to_s(net: ReadArcNet, max_states: Optional[int] = None) -> Term:
    check_safe(net, max_states)
    components: List[Tuple[Term, FrozenSet[str]]] = []
    for place in net.places:
        state = f"M_{place}" if place in net.initial_marking else f"E_{place}"
        components.append((desugar(place_equations(net, place), Var(state)), net.neighbourhood(place)))
    for transition in net.isolated():
        logger.warning(f"Transition {transition} is connected to no place; it is always enabled")
        components.append((Rec("x", Prefix(Action(transition), Var("x"))), frozenset({transition})))

    if not components:
        return NIL
    term, names = components[0]
    for component, component_names in components[1:]:
        term = Par(term, component, names & component_names)
        names = names | component_names
    relabelling = Relabelling.of({t: label for t, label in net.labels.items()})
    if relabelling.pairs:
        term = Relabel(term, relabelling)
    logger.info(f"Translated net with {len(net.places)} places and {len(net.labels)} transitions")
    return term
