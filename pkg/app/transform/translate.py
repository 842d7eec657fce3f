"""Translations between the read-set and the read-action algebra."""

import logging
from typing import Dict, FrozenSet, Iterable

from app.core.actions import Action, ordered
from app.core.errors import ImproperInput, NotRnf, WrongLanguage
from app.core.predicates import proper_violation, rnf_violation
from app.core.terms import ReadPrefix, ReadSet, Term, children, with_children

logger = logging.getLogger(__name__)


def merge_read_actions(actions: Iterable[Action]) -> FrozenSet[Action]:
    """One member per name; the urgent copy wins over a lazy one."""
    merged: Dict[str, Action] = {}
    for action in actions:
        if action.urgent or action.name not in merged:
            merged[action.name] = action
    return frozenset(merged.values())


def s_to_r(term: Term) -> Term:
    """Read sets become read-prefix chains in canonical action order."""
    violation = proper_violation(term)
    if violation is not None:
        raise ImproperInput(violation.describe(), path=violation.path)
    return _s_to_r(term)


def _s_to_r(term: Term) -> Term:
    if isinstance(term, ReadPrefix):
        raise WrongLanguage("read-action prefix in a read-set term")
    if isinstance(term, ReadSet):
        result = _s_to_r(term.body)
        for action in reversed(ordered(term.actions)):
            result = ReadPrefix(action, result)
        return result
    return with_children(term, tuple(_s_to_r(child) for child in children(term)))


def r_to_s(term: Term) -> Term:
    """Maximal read-prefix chains collapse into one merged read set."""
    violation = rnf_violation(term)
    if violation is not None:
        raise NotRnf(violation.describe(), path=violation.path)
    return _r_to_s(term)


def _r_to_s(term: Term) -> Term:
    if isinstance(term, ReadSet):
        raise WrongLanguage("read-set prefix in a read-action term")
    if isinstance(term, ReadPrefix):
        chain = []
        while isinstance(term, ReadPrefix):
            chain.append(term.action)
            term = term.body
        return ReadSet(merge_read_actions(chain), _r_to_s(term))
    return with_children(term, tuple(_r_to_s(child) for child in children(term)))
