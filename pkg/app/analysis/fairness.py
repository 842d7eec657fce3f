"""
Fair traces: visible action sequences of runs with infinitely many full 1-steps.

A finite word is fair if some run emits exactly that word and then stays in
a cycle of tau and time steps containing a full 1-step. Such lasso tails are
found with strongly connected components of the tau/time subgraph.
Infinite traces are handled in lasso form, a prefix followed by a repeated
loop, on the product of the LTS with the loop.
"""

import logging
from itertools import product
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import networkx as nx

from app.analysis.lts import Lts, Verdict, explore, is_internal, visible_name
from app.core.terms import Term

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]


def parse_word(text: str) -> Word:
    """'aab' -> (a, a, b); names longer than one letter are separated by commas or spaces."""
    text = text.strip()
    if not text:
        return ()
    if "," in text or " " in text:
        return tuple(part for part in text.replace(",", " ").split() if part)
    return tuple(text)


def format_word(word: Sequence[str]) -> str:
    if all(len(name) == 1 for name in word):
        return "".join(word)
    return ",".join(word)


def fair_states(lts: Lts) -> FrozenSet[int]:
    """States from which a tau/time lasso with a full 1-step is reachable through tau/time steps."""
    internal = nx.DiGraph()
    internal.add_nodes_from(range(len(lts.states)))
    full_edges: List[Tuple[int, int]] = []
    for edge in lts.edges:
        if is_internal(edge.label):
            internal.add_edge(edge.source, edge.target)
            if edge.label.is_full_time:
                full_edges.append((edge.source, edge.target))

    component_of: Dict[int, int] = {}
    for number, component in enumerate(nx.strongly_connected_components(internal)):
        for state in component:
            component_of[state] = number
    cores: Set[int] = set()
    for source, target in full_edges:
        if component_of[source] == component_of[target]:
            cores.add(source)

    good: Set[int] = set(cores)
    for state in cores:
        good |= nx.ancestors(internal, state)
    return frozenset(good)


def _closure(lts: Lts, states: Set[int]) -> Set[int]:
    stack = list(states)
    seen = set(states)
    while stack:
        state = stack.pop()
        for edge in lts.outgoing(state):
            if is_internal(edge.label) and edge.target not in seen:
                seen.add(edge.target)
                stack.append(edge.target)
    return seen


def _after(lts: Lts, states: Set[int], name: str) -> Set[int]:
    moved = {edge.target for state in states for edge in lts.outgoing(state) if visible_name(edge.label) == name}
    return _closure(lts, moved)


def fair_member_lts(lts: Lts, word: Sequence[str]) -> Verdict:
    good = fair_states(lts)
    current = _closure(lts, {lts.initial})
    for name in word:
        current = _after(lts, current, name)
        if not current:
            break
    if current & good:
        return Verdict.YES
    return Verdict.UNKNOWN if lts.truncated else Verdict.NO


def fair_member(
    term: Term, word: Sequence[str], max_states: Optional[int] = None, max_depth: Optional[int] = None
) -> Verdict:
    verdict = fair_member_lts(explore(term, max_states, max_depth), word)
    logger.info(f"Fair membership of {format_word(word) or '<empty>'}: {verdict.value}")
    return verdict


def fair_words_lts(lts: Lts, max_len: int) -> List[Word]:
    good = fair_states(lts)
    words: List[Word] = []
    layer: List[Tuple[Word, FrozenSet[int]]] = [((), frozenset(_closure(lts, {lts.initial})))]
    for length in range(max_len + 1):
        following: List[Tuple[Word, FrozenSet[int]]] = []
        for word, states in layer:
            if states & good:
                words.append(word)
            if length == max_len:
                continue
            names = sorted(
                {
                    visible_name(edge.label)
                    for state in states
                    for edge in lts.outgoing(state)
                    if visible_name(edge.label) is not None
                }
            )
            for name in names:
                following.append((word + (name,), frozenset(_after(lts, set(states), name))))
        layer = following
    return words


def fair_words_up_to(
    term: Term, max_len: int, max_states: Optional[int] = None, max_depth: Optional[int] = None
) -> List[Word]:
    """Every fair word of length at most `max_len`, shortest first."""
    lts = explore(term, max_states, max_depth)
    words = fair_words_lts(lts, max_len)
    if lts.truncated:
        logger.warning("Fair words computed on a truncated state space may be incomplete")
    return words


def fair_lasso_lts(lts: Lts, prefix: Sequence[str], loop: Sequence[str]) -> Verdict:
    """
    Is the infinite trace `prefix loop loop ...` fair?

    Searches the product of the LTS with the cycle reading `loop` for a
    reachable strongly connected part that reads at least one loop letter
    and contains a full 1-step.
    """
    if not loop:
        return fair_member_lts(lts, prefix)
    start = _closure(lts, {lts.initial})
    for name in prefix:
        start = _after(lts, start, name)

    graph = nx.DiGraph()
    advancing: List[Tuple[Tuple[int, int], Tuple[int, int]]] = []
    full: List[Tuple[Tuple[int, int], Tuple[int, int]]] = []
    stack = [(state, 0) for state in start]
    seen = set(stack)
    while stack:
        node = stack.pop()
        state, position = node
        graph.add_node(node)
        for edge in lts.outgoing(state):
            if is_internal(edge.label):
                target = (edge.target, position)
                if edge.label.is_full_time:
                    full.append((node, target))
            elif visible_name(edge.label) == loop[position]:
                target = (edge.target, (position + 1) % len(loop))
                advancing.append((node, target))
            else:
                continue
            graph.add_edge(node, target)
            if target not in seen:
                seen.add(target)
                stack.append(target)

    component_of: Dict[Tuple[int, int], int] = {}
    for number, component in enumerate(nx.strongly_connected_components(graph)):
        for node in component:
            component_of[node] = number
    with_full = {component_of[a] for a, b in full if component_of[a] == component_of[b]}
    with_letter = {component_of[a] for a, b in advancing if component_of[a] == component_of[b]}
    if with_full & with_letter:
        return Verdict.YES
    return Verdict.UNKNOWN if lts.truncated else Verdict.NO


def fair_lasso(
    term: Term,
    prefix: Sequence[str],
    loop: Sequence[str],
    max_states: Optional[int] = None,
    max_depth: Optional[int] = None,
) -> Verdict:
    return fair_lasso_lts(explore(term, max_states, max_depth), prefix, loop)


def find_fair_lasso(lts: Lts, max_len: int) -> Optional[Tuple[Word, Word]]:
    """Shortest (prefix, loop) with `prefix loop loop ...` fair and |prefix| + |loop| <= max_len."""
    names = sorted({visible_name(edge.label) for edge in lts.edges if visible_name(edge.label) is not None})
    for total in range(1, max_len + 1):
        for loop_len in range(1, total + 1):
            for prefix in product(names, repeat=total - loop_len):
                for loop in product(names, repeat=loop_len):
                    if fair_lasso_lts(lts, prefix, loop) is Verdict.YES:
                        return prefix, loop
    return None
