"""Syntactic predicates: sort, guardedness, stratification, properness, RNF.

The properness family follows the read-set discipline: a term is *proper* when
it is read-proper and rec-proper; a read-action term is in *read normal form*
when it is rec-proper and ra-proper. Every `*_violation` function returns the
first offending subterm (pre-order) or None so the CLI can point at the
culprit; the boolean predicates come from a single bottom-up pass (`summarize`)
and must agree with the walkers.
"""

from dataclasses import dataclass, replace
from typing import FrozenSet, Optional, Set

from app.core.errors import format_path
from app.core.terms import (
    Nil,
    Par,
    Path,
    Prefix,
    ReadPrefix,
    ReadSet,
    Rec,
    Relabel,
    Sum,
    Term,
    Var,
    children,
    free_vars,
    subterms,
)


@dataclass(frozen=True)
class Violation:
    predicate: str
    path: Path
    subterm: Term
    reason: str

    def describe(self) -> str:
        where = format_path(self.path) or "<root>"
        return f"{self.predicate} fails at {where}: {self.reason}"


def _is_read_node(term: Term) -> bool:
    return isinstance(term, (ReadPrefix, ReadSet))


def sort(term: Term) -> FrozenSet[str]:
    """Visible actions occurring in prefixes and reads, plus every ib(Phi)."""
    result: Set[str] = set()
    for _, sub in subterms(term):
        if isinstance(sub, (Prefix, ReadPrefix)):
            if sub.action.is_visible:
                result.add(sub.action.name)
        elif isinstance(sub, ReadSet):
            result.update(action.name for action in sub.actions if action.is_visible)
        elif isinstance(sub, Relabel):
            result.update(sub.relabelling.image_base())
    return frozenset(result)


def alphabet(term: Term) -> FrozenSet[str]:
    """Every visible name written anywhere in the term (seed for fresh names)."""
    result: Set[str] = set(sort(term))
    for _, sub in subterms(term):
        if isinstance(sub, Par):
            result.update(sub.sync)
        elif isinstance(sub, Relabel):
            result.update(sub.relabelling.support)
    return frozenset(result)


def is_guarded(var: str, term: Term, strict: bool = False) -> bool:
    """
    True iff every free occurrence of `var` lies in the scope of a prefix.

    With `strict=False` read prefixes and non-empty read sets count as
    guards; with `strict=True` only action prefixes do.
    """
    if isinstance(term, Var):
        return term.name != var
    if isinstance(term, Nil):
        return True
    if isinstance(term, Prefix):
        return True
    if isinstance(term, ReadPrefix) and not strict:
        return True
    if isinstance(term, ReadSet) and term.actions and not strict:
        return True
    if isinstance(term, Rec) and term.var == var:
        return True
    return all(is_guarded(var, child, strict) for child in children(term))


def is_initial(term: Term) -> bool:
    """No urgent action anywhere in the term."""
    for _, sub in subterms(term):
        if isinstance(sub, (Prefix, ReadPrefix)) and sub.action.urgent:
            return False
        if isinstance(sub, ReadSet) and any(action.urgent for action in sub.actions):
            return False
    return True


def stratification_violation(term: Term) -> Optional[Violation]:
    """Every action-prefix body must be an initial term."""
    for path, sub in subterms(term):
        if isinstance(sub, Prefix) and not is_initial(sub.body):
            return Violation("stratified", path, sub, "urgent action below an action prefix")
    return None


def recursion_violation(term: Term, strict: bool = True) -> Optional[Violation]:
    for path, sub in subterms(term):
        if isinstance(sub, Rec) and not is_guarded(sub.var, sub.body, strict):
            return Violation("guarded", path, sub, f"variable {sub.var} is not guarded")
    return None


# --- read-guardedness and the properness family -------------------------------------------


def read_guard_violation(term: Term, path: Path = ()) -> Optional[Violation]:
    """First read node that is not in the scope of an action prefix."""
    if isinstance(term, Prefix):
        return None
    if _is_read_node(term):
        return Violation("read-guarded", path, term, "read prefix not below an action prefix")
    for index, child in enumerate(children(term)):
        found = read_guard_violation(child, path + (index,))
        if found:
            return found
    return None


def read_proper_violation(term: Term) -> Optional[Violation]:
    """Sums must be read-guarded; read-set bodies must be read-guarded."""
    for path, sub in subterms(term):
        if isinstance(sub, Sum):
            inner = read_guard_violation(sub)
            if inner:
                return Violation("read-proper", path, sub, "choice operand starts with a read prefix")
        elif isinstance(sub, ReadSet):
            if read_guard_violation(sub.body):
                return Violation("read-proper", path, sub, "read-set body is not read-guarded")
    return None


def x_proper_violation(var: str, term: Term) -> Optional[Violation]:
    """
    Free `var` must be action-guarded inside every choice, read node and
    nested recursion it occurs in.
    """
    for path, sub in subterms(term):
        if not isinstance(sub, (Sum, ReadSet, ReadPrefix, Rec)):
            continue
        if isinstance(sub, Rec) and sub.var == var:
            continue
        if var not in free_vars(sub):
            continue
        scope = sub.body if isinstance(sub, (ReadSet, ReadPrefix, Rec)) else sub
        if not is_guarded(var, scope, strict=True):
            return Violation("x-proper", path, sub, f"{var} is unguarded in this subterm")
    return None


def rec_proper_violation(term: Term) -> Optional[Violation]:
    for path, sub in subterms(term):
        if not isinstance(sub, Rec):
            continue
        if read_guard_violation(sub.body) is None:
            continue
        inner = x_proper_violation(sub.var, sub.body)
        if inner:
            return Violation(
                "rec-proper",
                path + (0,) + inner.path,
                inner.subterm,
                f"body of rec {sub.var} is neither read-guarded nor {sub.var}-proper",
            )
    return None


def proper_violation(term: Term) -> Optional[Violation]:
    return read_proper_violation(term) or rec_proper_violation(term)


def ra_proper_violation(term: Term) -> Optional[Violation]:
    """Sums read-guarded; every read-prefix body read-guarded or another read prefix."""
    for path, sub in subterms(term):
        if isinstance(sub, Sum):
            if read_guard_violation(sub):
                return Violation("ra-proper", path, sub, "choice operand starts with a read prefix")
        elif isinstance(sub, ReadPrefix):
            if isinstance(sub.body, ReadPrefix):
                continue
            if read_guard_violation(sub.body):
                return Violation("ra-proper", path, sub, "read-prefix body is not read-guarded")
    return None


def rnf_violation(term: Term) -> Optional[Violation]:
    return ra_proper_violation(term) or rec_proper_violation(term)


# --- single bottom-up pass ----------------------------------------------------------------


@dataclass(frozen=True)
class _Summary:
    read_guarded: bool
    unguarded: FrozenSet[str]  # free variables not below an action prefix
    not_x_proper: FrozenSet[str]  # free x for which the subtree is not x-proper
    is_read_node: bool
    read_proper: bool
    ra_proper: bool
    rec_proper: bool


_EMPTY: FrozenSet[str] = frozenset()


def summarize(term: Term) -> _Summary:
    """
    Compute every properness flag of `term` in one bottom-up traversal.

    Agrees with the `*_violation` walkers, which exist for diagnostics.
    """
    if isinstance(term, Nil):
        return _Summary(True, _EMPTY, _EMPTY, False, True, True, True)
    if isinstance(term, Var):
        return _Summary(True, frozenset({term.name}), _EMPTY, False, True, True, True)
    if isinstance(term, Prefix):
        body = summarize(term.body)
        return _Summary(True, _EMPTY, body.not_x_proper, False, body.read_proper, body.ra_proper, body.rec_proper)
    if isinstance(term, (ReadSet, ReadPrefix)):
        body = summarize(term.body)
        read_proper = body.read_proper and (body.read_guarded or not isinstance(term, ReadSet))
        ra_proper = body.ra_proper and (
            not isinstance(term, ReadPrefix) or body.read_guarded or body.is_read_node
        )
        return _Summary(
            False,
            body.unguarded,
            body.not_x_proper | body.unguarded,
            True,
            read_proper,
            ra_proper,
            body.rec_proper,
        )
    if isinstance(term, (Sum, Par)):
        left, right = summarize(term.left), summarize(term.right)
        guarded = left.read_guarded and right.read_guarded
        unguarded = left.unguarded | right.unguarded
        not_x_proper = left.not_x_proper | right.not_x_proper
        is_sum = isinstance(term, Sum)
        if is_sum:
            not_x_proper |= unguarded
        return _Summary(
            guarded,
            unguarded,
            not_x_proper,
            False,
            left.read_proper and right.read_proper and (guarded or not is_sum),
            left.ra_proper and right.ra_proper and (guarded or not is_sum),
            left.rec_proper and right.rec_proper,
        )
    if isinstance(term, Relabel):
        return replace(summarize(term.body), is_read_node=False)
    body = summarize(term.body)
    var = term.var
    rec_proper = body.rec_proper and (body.read_guarded or var not in body.not_x_proper)
    return _Summary(
        body.read_guarded,
        body.unguarded - {var},
        (body.not_x_proper | body.unguarded) - {var},
        False,
        body.read_proper,
        body.ra_proper,
        rec_proper,
    )


def is_read_guarded(term: Term) -> bool:
    return summarize(term).read_guarded


def is_read_proper(term: Term) -> bool:
    return summarize(term).read_proper


def is_rec_proper(term: Term) -> bool:
    return summarize(term).rec_proper


def is_x_proper(var: str, term: Term) -> bool:
    return var not in summarize(term).not_x_proper


def is_proper(term: Term) -> bool:
    summary = summarize(term)
    return summary.read_proper and summary.rec_proper


def is_rnf(term: Term) -> bool:
    summary = summarize(term)
    return summary.ra_proper and summary.rec_proper
