"""Operational semantics of the read-action algebra.

Two action relations: ordinary transitions change the state, read transitions
leave it untouched (up to recursion unfolding). Time steps come from the
shared refusal semantics in `app.semantics.timing`.
"""

from functools import lru_cache
from typing import FrozenSet, Optional, Tuple

from app.core.actions import Action
from app.core.errors import OpenTerm, WrongLanguage
from app.core.terms import Nil, Par, Prefix, ReadPrefix, ReadSet, Rec, Relabel, Sum, Term, Var, unfold
from app.semantics import timing
from app.semantics.labels import StepLabel
from app.semantics.refusal import RefusalSet

Transition = Tuple[Action, Term]
Transitions = FrozenSet[Transition]


def _reject(term: Term) -> None:
    if isinstance(term, Var):
        raise OpenTerm(f"free variable {term.name} has no behaviour")
    if isinstance(term, ReadSet):
        raise WrongLanguage("read-set prefix in a read-action term")


@lru_cache(maxsize=65536)
def ordinary_steps(term: Term) -> Transitions:
    """Ordinary action transitions (state-changing)."""
    _reject(term)
    if isinstance(term, Nil):
        return frozenset()
    if isinstance(term, Prefix):
        return frozenset({(term.action.lazy(), term.body)})
    if isinstance(term, ReadPrefix):
        return ordinary_steps(term.body)
    if isinstance(term, Sum):
        return ordinary_steps(term.left) | ordinary_steps(term.right)
    if isinstance(term, Par):
        return _par_ordinary(term)
    if isinstance(term, Relabel):
        relabelling = term.relabelling
        return frozenset(
            (relabelling.apply(action), Relabel(successor, relabelling))
            for action, successor in ordinary_steps(term.body)
        )
    if isinstance(term, Rec):
        return ordinary_steps(unfold(term))
    raise TypeError(f"not a term: {term!r}")


def _par_ordinary(term: Par) -> Transitions:
    left, right, sync = term.left, term.right, term.sync
    result = set()
    left_ordinary, right_ordinary = ordinary_steps(left), ordinary_steps(right)
    for action, successor in left_ordinary:
        if action.name not in sync:
            result.add((action, Par(successor, right, sync)))
    for action, successor in right_ordinary:
        if action.name not in sync:
            result.add((action, Par(left, successor, sync)))
    if not sync:
        return frozenset(result)
    # an ordinary step synchronises with an ordinary or a read step of the partner
    left_any = left_ordinary | read_steps(left)
    right_any = right_ordinary | read_steps(right)
    for action, left_successor in left_ordinary:
        if action.name in sync:
            for partner, right_successor in right_any:
                if partner == action:
                    result.add((action, Par(left_successor, right_successor, sync)))
    for action, right_successor in right_ordinary:
        if action.name in sync:
            for partner, left_successor in left_any:
                if partner == action:
                    result.add((action, Par(left_successor, right_successor, sync)))
    return frozenset(result)


@lru_cache(maxsize=65536)
def read_steps(term: Term) -> Transitions:
    """Read action transitions (state-preserving, non-blocking)."""
    _reject(term)
    if isinstance(term, (Nil, Prefix)):
        return frozenset()
    if isinstance(term, ReadPrefix):
        own = {(term.action.lazy(), term)}
        own.update((action, ReadPrefix(term.action, successor)) for action, successor in read_steps(term.body))
        return frozenset(own)
    if isinstance(term, Sum):
        result = {(action, Sum(successor, term.right)) for action, successor in read_steps(term.left)}
        result.update((action, Sum(term.left, successor)) for action, successor in read_steps(term.right))
        return frozenset(result)
    if isinstance(term, Par):
        left, right, sync = term.left, term.right, term.sync
        left_reads, right_reads = read_steps(left), read_steps(right)
        result = {(a, Par(s, right, sync)) for a, s in left_reads if a.name not in sync}
        result.update((a, Par(left, s, sync)) for a, s in right_reads if a.name not in sync)
        for action, left_successor in left_reads:
            if action.name in sync:
                for partner, right_successor in right_reads:
                    if partner == action:
                        result.add((action, Par(left_successor, right_successor, sync)))
        return frozenset(result)
    if isinstance(term, Relabel):
        relabelling = term.relabelling
        return frozenset(
            (relabelling.apply(action), Relabel(successor, relabelling))
            for action, successor in read_steps(term.body)
        )
    if isinstance(term, Rec):
        return read_steps(unfold(term))
    raise TypeError(f"not a term: {term!r}")


def steps(term: Term) -> FrozenSet[Tuple[StepLabel, Term]]:
    """All action transitions, tagged ordinary or read."""
    tagged = {(StepLabel.ordinary(action), successor) for action, successor in ordinary_steps(term)}
    tagged.update((StepLabel.read(action), successor) for action, successor in read_steps(term))
    return frozenset(tagged)


def can_refuse(term: Term, refused: RefusalSet) -> Optional[Term]:
    _reject(term)
    return timing.can_refuse(term, refused)


def max_refusal(term: Term) -> Optional[timing.TimeStep]:
    _reject(term)
    return timing.max_refusal(term)


def one_step(term: Term) -> Optional[Term]:
    _reject(term)
    return timing.one_step(term)
