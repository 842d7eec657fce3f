"""Refusal (time-step) semantics shared by both algebras.

`max_refusal` computes, compositionally, the largest refusal set X for which a
time step exists together with the unique time successor. `can_refuse`
applies the rules directly for one given X and serves as the reference oracle;
the two must agree (`can_refuse(Q, X)` succeeds iff X is contained in the
maximal set) and that agreement is tested rather than assumed.
"""

from functools import lru_cache
from itertools import combinations
from typing import Optional, Tuple

from app.core.actions import TAU, urgentify_readset
from app.core.errors import OpenTerm
from app.core.terms import Nil, Par, Prefix, ReadPrefix, ReadSet, Rec, Relabel, Sum, Term, Var, unfold
from app.semantics.refusal import FULL, RefusalSet

TimeStep = Tuple[RefusalSet, Term]


def urgent_set(ms) -> frozenset:
    """U(ms): names (tau included) of the urgent members of a read set."""
    return frozenset(action.name for action in ms if action.urgent)


@lru_cache(maxsize=65536)
def max_refusal(term: Term) -> Optional[TimeStep]:
    if isinstance(term, Nil):
        return FULL, term
    if isinstance(term, Var):
        raise OpenTerm(f"free variable {term.name} has no time behaviour")
    if isinstance(term, Prefix):
        action = term.action
        if not action.urgent:
            return FULL, Prefix(action.urgentified(), term.body)
        if action.is_tau:
            return None
        return FULL.without({action.name}), term
    if isinstance(term, ReadPrefix):
        action = term.action
        if action.urgent and action.is_tau:
            return None
        inner = max_refusal(term.body)
        if inner is None:
            return None
        refusal, successor = inner
        if action.urgent:
            refusal = refusal.without({action.name})
        return refusal, ReadPrefix(action.urgentified(), successor)
    if isinstance(term, ReadSet):
        urgent = urgent_set(term.actions)
        if TAU in urgent:
            return None
        inner = max_refusal(term.body)
        if inner is None:
            return None
        refusal, successor = inner
        return refusal.without(urgent), ReadSet(urgentify_readset(term.actions), successor)
    if isinstance(term, Sum):
        left, right = max_refusal(term.left), max_refusal(term.right)
        if left is None or right is None:
            return None
        return left[0] & right[0], Sum(left[1], right[1])
    if isinstance(term, Par):
        left, right = max_refusal(term.left), max_refusal(term.right)
        if left is None or right is None:
            return None
        sync = RefusalSet.finite(term.sync)
        refusal = (sync & (left[0] | right[0])) | ((left[0] & right[0]) - sync)
        return refusal, Par(left[1], right[1], term.sync)
    if isinstance(term, Relabel):
        inner = max_refusal(term.body)
        if inner is None:
            return None
        refusal, successor = inner
        relabelling = term.relabelling
        # a hidden action that cannot be delayed behaves like an urgent tau
        if any(name not in refusal for name in relabelling.hidden):
            return None
        return refusal.image_refusal(relabelling), Relabel(successor, relabelling)
    if isinstance(term, Rec):
        return max_refusal(unfold(term))
    raise TypeError(f"not a term: {term!r}")


def can_refuse(term: Term, refused: RefusalSet) -> Optional[Term]:
    """Direct rule application for one refusal set; None if no derivation exists."""
    if isinstance(term, Nil):
        return term
    if isinstance(term, Var):
        raise OpenTerm(f"free variable {term.name} has no time behaviour")
    if isinstance(term, Prefix):
        action = term.action
        if not action.urgent:
            return Prefix(action.urgentified(), term.body)
        if action.is_tau or action.name in refused:
            return None
        return term
    if isinstance(term, ReadPrefix):
        action = term.action
        if action.urgent and (action.is_tau or action.name in refused):
            return None
        successor = can_refuse(term.body, refused)
        if successor is None:
            return None
        return ReadPrefix(action.urgentified(), successor)
    if isinstance(term, ReadSet):
        urgent = urgent_set(term.actions)
        if TAU in urgent or any(name in refused for name in urgent):
            return None
        successor = can_refuse(term.body, refused)
        if successor is None:
            return None
        return ReadSet(urgentify_readset(term.actions), successor)
    if isinstance(term, Sum):
        left = can_refuse(term.left, refused)
        right = can_refuse(term.right, refused)
        if left is None or right is None:
            return None
        return Sum(left, right)
    if isinstance(term, Par):
        return _can_refuse_par(term, refused)
    if isinstance(term, Relabel):
        successor = can_refuse(term.body, refused.preimage(term.relabelling))
        if successor is None:
            return None
        return Relabel(successor, term.relabelling)
    if isinstance(term, Rec):
        return can_refuse(unfold(term), refused)
    raise TypeError(f"not a term: {term!r}")


def _can_refuse_par(term: Par, refused: RefusalSet) -> Optional[Term]:
    # Each synchronised refused action needs one side that delays it; every
    # other refused action must be delayed by both. Side conditions are
    # antitone in X, so trying the smallest X1, X2 per split is enough.
    sync = RefusalSet.finite(term.sync)
    shared = refused - sync
    contested = sorted((refused & sync).names)
    for size in range(len(contested) + 1):
        for left_part in combinations(contested, size):
            right_part = set(contested) - set(left_part)
            left = can_refuse(term.left, shared | RefusalSet.finite(left_part))
            if left is None:
                continue
            right = can_refuse(term.right, shared | RefusalSet.finite(right_part))
            if right is None:
                continue
            return Par(left, right, term.sync)
    return None


def one_step(term: Term) -> Optional[Term]:
    """The successor of a full 1-step, if the term can let time pass on its own."""
    step = max_refusal(term)
    if step is None or not step[0].is_full:
        return None
    return step[1]


def has_refusal(term: Term, refused: RefusalSet) -> bool:
    step = max_refusal(term)
    return step is not None and refused <= step[0]
