"""
Timed bisimulation by partition refinement.

Both transition systems are put side by side and states are split by their
signature (label key, target block) until the partition is stable. Time edges
carry the maximal refusal set, and time steps are deterministic and their
refusal sets downward closed, so comparing maximal sets is the same as
matching every refusal set individually.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Hashable, List, Optional, Set, Tuple

from app.analysis.lts import Lts, Verdict
from app.core.actions import FreshNames
from app.semantics.labels import StepKind, StepLabel
from app.semantics.refusal import EMPTY, RefusalSet

logger = logging.getLogger(__name__)

Node = Tuple[int, int]  # (side, state)


class BisimScheme(str, Enum):
    R = "r"  # ordinary and read steps matched separately
    S = "s"  # one action relation
    UNTIMED = "untimed"  # actions only, time steps ignored


def label_key(label: StepLabel, scheme: BisimScheme) -> Optional[Hashable]:
    if label.is_time:
        return None if scheme is BisimScheme.UNTIMED else ("time", label.refusal)
    if scheme is BisimScheme.R:
        return label.kind.value, label.action.name
    return StepKind.ACTION.value, label.action.name


def _render_key(key: Hashable) -> str:
    kind, value = key
    if kind == "time":
        return str(value)
    return f"{value}?" if kind == StepKind.READ.value else value


@dataclass
class BisimResult:
    verdict: Verdict
    witness: Optional[Dict[str, Any]] = None
    blocks: int = 0
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"verdict": self.verdict.value, "blocks": self.blocks}
        if self.witness is not None:
            payload["witness"] = self.witness
        if self.notes:
            payload["notes"] = self.notes
        return payload


class _Union:
    """Disjoint union of two LTSs with label keys precomputed for one scheme."""

    def __init__(self, left: Lts, right: Lts, scheme: BisimScheme):
        self.sides = (left, right)
        self.moves: Dict[Node, List[Tuple[Hashable, Node]]] = {}
        for side, lts in enumerate(self.sides):
            for state in range(len(lts.states)):
                self.moves[(side, state)] = []
            for edge in lts.edges:
                key = label_key(edge.label, scheme)
                if key is not None:
                    self.moves[(side, edge.source)].append((key, (side, edge.target)))

    def enabled(self, node: Node) -> FrozenSet[Hashable]:
        return frozenset(key for key, _ in self.moves[node])

    def complete(self, node: Node) -> bool:
        side, state = node
        return state not in self.sides[side].frontier


def refine(union: _Union) -> Dict[Node, int]:
    block = {node: 0 for node in union.moves}
    count = 1
    while True:
        signatures: Dict[Tuple, int] = {}
        refined = {}
        for node in sorted(union.moves):
            signature = (block[node], frozenset((key, block[target]) for key, target in union.moves[node]))
            refined[node] = signatures.setdefault(signature, len(signatures))
        if len(signatures) == count:
            return refined
        block, count = refined, len(signatures)


def _distinguishing_refusal(left: Set[Hashable], right: Set[Hashable]) -> Optional[RefusalSet]:
    """A refusal set one side can perform in a time step and the other cannot."""
    left_time = next((value for kind, value in left if kind == "time"), None)
    right_time = next((value for kind, value in right if kind == "time"), None)
    if left_time == right_time:
        return None
    if left_time is None or right_time is None:
        return EMPTY
    difference = (right_time - left_time) if not right_time <= left_time else (left_time - right_time)
    if not difference.cofinite:
        return difference
    used = difference.names | left_time.names | right_time.names
    return RefusalSet.finite({next(FreshNames(used, base="z"))})


def _witness(union: _Union, block: Dict[Node, int], start: Tuple[Node, Node]) -> Optional[Dict[str, Any]]:
    """Shortest label sequence leading both sides to states with different enabled steps."""
    parents: Dict[Tuple[Node, Node], Tuple[Optional[Tuple[Node, Node]], Optional[Hashable]]] = {start: (None, None)}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        left, right = pair
        left_keys, right_keys = union.enabled(left), union.enabled(right)
        if left_keys != right_keys and union.complete(left) and union.complete(right):
            path = []
            cursor = pair
            while parents[cursor][0] is not None:
                cursor, key = parents[cursor]
                path.append(_render_key(key))
            path.reverse()
            left_only = left_keys - right_keys
            right_only = right_keys - left_keys
            refusal = _distinguishing_refusal(set(left_only), set(right_only))
            return {
                "path": path,
                "left_only": sorted(_render_key(key) for key in left_only),
                "right_only": sorted(_render_key(key) for key in right_only),
                "left_state": union.sides[0].describe(left[1]),
                "right_state": union.sides[1].describe(right[1]),
                "refusal": None if refusal is None else str(refusal),
            }
        for key, left_target in union.moves[left]:
            for right_key, right_target in union.moves[right]:
                if right_key != key or block[left_target] == block[right_target]:
                    continue
                successor = (left_target, right_target)
                if successor not in parents:
                    parents[successor] = (pair, key)
                    queue.append(successor)
    return None


def bisim(left: Lts, right: Lts, scheme: BisimScheme = BisimScheme.R) -> BisimResult:
    union = _Union(left, right, scheme)
    block = refine(union)
    start = ((0, left.initial), (1, right.initial))
    truncated = left.truncated or right.truncated
    blocks = len(set(block.values()))
    if block[start[0]] == block[start[1]]:
        if truncated:
            return BisimResult(Verdict.UNKNOWN, blocks=blocks, notes=["no difference found within the bounds"])
        logger.info(f"Equivalent ({scheme.value} scheme, {blocks} blocks)")
        return BisimResult(Verdict.EQUIVALENT, blocks=blocks)
    witness = _witness(union, block, start)
    if witness is None:
        return BisimResult(Verdict.UNKNOWN, blocks=blocks, notes=["difference depends on unexplored states"])
    logger.info(f"Distinguished after {len(witness['path'])} steps ({scheme.value} scheme)")
    return BisimResult(Verdict.DISTINGUISHED, witness=witness, blocks=blocks)

