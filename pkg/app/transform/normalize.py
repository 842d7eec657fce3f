"""
Rewriting read-action terms into read normal form.

Works on the fragment where every choice and every recursion is already in
read normal form. Action prefixes, parallel composition and relabelling are
handled structurally; a read prefix is pushed into its body:

- over a parallel composition, a fresh action `e` is read on both sides and
  renamed back afterwards (L4 followed by `[e -> a]`);
- over a relabelling, the fresh action is read inside and the relabelling is
  extended with `e -> a` (L5 backwards); relabellings created this way are
  merged (L6) instead of stacked;
- over a recursion whose body is not read-guarded, the recursion is unfolded
  once (L7);
- anywhere else the read prefix is already in normal form.
"""

import logging

from app.core.actions import Action, FreshNames
from app.core.errors import OutsideFragment
from app.core.predicates import alphabet, is_read_guarded, rnf_violation
from app.core.relabelling import Relabelling
from app.core.terms import Par, Prefix, ReadPrefix, Rec, Relabel, Sum, Term, size, subterms, unfold

logger = logging.getLogger(__name__)


def normalize_to_rnf(term: Term) -> Term:
    for path, sub in subterms(term):
        if isinstance(sub, (Sum, Rec)) and rnf_violation(sub) is not None:
            kind = "choice" if isinstance(sub, Sum) else "recursion"
            raise OutsideFragment(f"{kind} subterm is not in read normal form", path=path)
    fresh = FreshNames(alphabet(term))
    result = _normalize(term, fresh)
    logger.debug(f"Normalized term of size {size(term)} into one of size {size(result)}")
    return result


def _normalize(term: Term, fresh: FreshNames) -> Term:
    if isinstance(term, Prefix):
        return Prefix(term.action, _normalize(term.body, fresh))
    if isinstance(term, Par):
        return Par(_normalize(term.left, fresh), _normalize(term.right, fresh), term.sync)
    if isinstance(term, Relabel):
        inner = _normalize(term.body, fresh)
        if inner != term.body and isinstance(inner, Relabel):
            return Relabel(inner.body, inner.relabelling.then(term.relabelling))
        return Relabel(inner, term.relabelling)
    if isinstance(term, ReadPrefix):
        return _push_read(term.action, _normalize(term.body, fresh), fresh)
    # nil, variables, and choices and recursions of the fragment
    return term


def _push_read(action: Action, body: Term, fresh: FreshNames) -> Term:
    """A term in read normal form bisimilar to `action |> body`, for `body` in read normal form."""
    if isinstance(body, Par):
        carrier = Action(next(fresh), action.urgent)
        inner = Par(
            _push_read(carrier, body.left, fresh),
            _push_read(carrier, body.right, fresh),
            body.sync | {carrier.name},
        )
        return Relabel(inner, Relabelling.of({carrier.name: action.name}))
    if isinstance(body, Relabel):
        carrier = Action(next(fresh), action.urgent)
        extended = Relabelling.of({**body.relabelling.as_dict(), carrier.name: action.name})
        inner = _push_read(carrier, body.body, fresh)
        if isinstance(inner, Relabel):
            return Relabel(inner.body, inner.relabelling.then(extended))
        return Relabel(inner, extended)
    if isinstance(body, Rec) and not is_read_guarded(body):
        return _push_read(action, unfold(body), fresh)
    return ReadPrefix(action, body)
