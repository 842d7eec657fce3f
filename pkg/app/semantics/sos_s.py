"""Operational semantics of the read-set algebra: one action relation plus time."""

from functools import lru_cache
from typing import AbstractSet, FrozenSet, Optional, Tuple

from app.core.actions import Action
from app.core.errors import OpenTerm, WrongLanguage
from app.core.terms import Nil, Par, Prefix, ReadPrefix, ReadSet, Rec, Relabel, Sum, Term, Var, unfold
from app.semantics import timing
from app.semantics.labels import StepLabel
from app.semantics.refusal import RefusalSet

Transition = Tuple[Action, Term]


def _reject(term: Term) -> None:
    if isinstance(term, Var):
        raise OpenTerm(f"free variable {term.name} has no behaviour")
    if isinstance(term, ReadPrefix):
        raise WrongLanguage("read-action prefix in a read-set term")


@lru_cache(maxsize=65536)
def action_steps_s(term: Term) -> FrozenSet[Transition]:
    _reject(term)
    if isinstance(term, Nil):
        return frozenset()
    if isinstance(term, Prefix):
        return frozenset({(term.action.lazy(), term.body)})
    if isinstance(term, ReadSet):
        # reading any member loops; a body step drops the whole read set
        own = {(action.lazy(), term) for action in term.actions}
        return frozenset(own) | action_steps_s(term.body)
    if isinstance(term, Sum):
        return action_steps_s(term.left) | action_steps_s(term.right)
    if isinstance(term, Par):
        left, right, sync = term.left, term.right, term.sync
        left_steps, right_steps = action_steps_s(left), action_steps_s(right)
        result = {(a, Par(s, right, sync)) for a, s in left_steps if a.name not in sync}
        result.update((a, Par(left, s, sync)) for a, s in right_steps if a.name not in sync)
        for action, left_successor in left_steps:
            if action.name in sync:
                for partner, right_successor in right_steps:
                    if partner == action:
                        result.add((action, Par(left_successor, right_successor, sync)))
        return frozenset(result)
    if isinstance(term, Relabel):
        relabelling = term.relabelling
        return frozenset(
            (relabelling.apply(action), Relabel(successor, relabelling))
            for action, successor in action_steps_s(term.body)
        )
    if isinstance(term, Rec):
        return action_steps_s(unfold(term))
    raise TypeError(f"not a term: {term!r}")


def steps_s(term: Term) -> FrozenSet[Tuple[StepLabel, Term]]:
    return frozenset((StepLabel.act(action), successor) for action, successor in action_steps_s(term))


def urgent_set(ms: AbstractSet[Action]) -> FrozenSet[str]:
    return timing.urgent_set(ms)


def max_refusal_s(term: Term) -> Optional[timing.TimeStep]:
    _reject(term)
    return timing.max_refusal(term)


def can_refuse_s(term: Term, refused: RefusalSet) -> Optional[Term]:
    _reject(term)
    return timing.can_refuse(term, refused)


def one_step_s(term: Term) -> Optional[Term]:
    _reject(term)
    return timing.one_step(term)
