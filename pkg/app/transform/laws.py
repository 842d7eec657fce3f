"""
Algebraic laws over read-action terms, applied left to right at a position.

Every law checks that the subterm at the given path matches its left-hand
side (`NoMatch` otherwise) and that its side condition holds
(`SideConditionViolated` otherwise). Both sides of each law are timed
bisimilar; the test-suite checks this on random instances.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict

from app.analysis.lts import explore, is_deterministic
from app.core.actions import FreshNames
from app.core.errors import NoMatch, SideConditionViolated, WorkbenchError
from app.core.predicates import alphabet, sort
from app.core.relabelling import Relabelling
from app.core.terms import (
    Par,
    Path,
    ReadPrefix,
    Rec,
    Relabel,
    Sum,
    Term,
    is_closed,
    rename_actions,
    replace_at,
    subterm_at,
    unfold,
)
from app.syntax.printer import print_term

logger = logging.getLogger(__name__)


class LawId(str, Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"
    L6 = "L6"
    L7 = "L7"
    DET_CHOICE = "DetChoice"
    RENAME = "Rename"

    @classmethod
    def parse(cls, text: str) -> "LawId":
        for law in cls:
            if law.value.lower() == text.strip().lower():
                return law
        raise NoMatch(f"unknown law {text!r}; expected one of {', '.join(law.value for law in cls)}")


@dataclass(frozen=True)
class Law:
    law_id: LawId
    statement: str
    rewrite: Callable[[Term, Term], Term]  # (redex, whole term) -> replacement


def _read(redex: Term, law: LawId) -> ReadPrefix:
    if not isinstance(redex, ReadPrefix):
        raise NoMatch(f"{law.value} needs a read prefix, found {print_term(redex)}")
    return redex


def _swap_reads(redex: Term, _: Term) -> Term:
    outer = _read(redex, LawId.L1)
    inner = _read(outer.body, LawId.L1)
    return ReadPrefix(inner.action, ReadPrefix(outer.action, inner.body))


def _absorb_read(redex: Term, _: Term) -> Term:
    outer = _read(redex, LawId.L2)
    inner = _read(outer.body, LawId.L2)
    if inner.action.name != outer.action.name:
        raise SideConditionViolated(
            f"L2 needs two reads of the same action, found {outer.action} and {inner.action}"
        )
    if outer.action.urgent:
        return ReadPrefix(outer.action, inner.body)
    return inner


def _read_out_of_choice(redex: Term, _: Term) -> Term:
    if not isinstance(redex, Sum):
        raise NoMatch(f"L3 needs a choice, found {print_term(redex)}")
    if isinstance(redex.left, ReadPrefix):
        return ReadPrefix(redex.left.action, Sum(redex.left.body, redex.right))
    if isinstance(redex.right, ReadPrefix):
        return ReadPrefix(redex.right.action, Sum(redex.left, redex.right.body))
    raise NoMatch("L3 needs a choice with a read-prefixed operand")


def _distribute_read(redex: Term, _: Term) -> Term:
    read = _read(redex, LawId.L4)
    if not isinstance(read.body, Par):
        raise NoMatch(f"L4 needs a read prefix over a parallel composition, found {print_term(redex)}")
    action = read.action
    if action.is_tau:
        raise SideConditionViolated("L4 only distributes visible reads")
    if action.name in sort(read.body):
        raise SideConditionViolated(f"L4 needs {action.name} outside the sort of the parallel composition")
    par = read.body
    return Par(ReadPrefix(action, par.left), ReadPrefix(action, par.right), par.sync | {action.name})


def _read_out_of_relabel(redex: Term, _: Term) -> Term:
    if not isinstance(redex, Relabel) or not isinstance(redex.body, ReadPrefix):
        raise NoMatch(f"L5 needs a relabelled read prefix, found {print_term(redex)}")
    read, relabelling = redex.body, redex.relabelling
    return ReadPrefix(relabelling.apply(read.action), Relabel(read.body, relabelling))


def _merge_relabels(redex: Term, _: Term) -> Term:
    if not isinstance(redex, Relabel) or not isinstance(redex.body, Relabel):
        raise NoMatch(f"L6 needs two nested relabellings, found {print_term(redex)}")
    inner = redex.body
    return Relabel(inner.body, inner.relabelling.then(redex.relabelling))


def _unfold(redex: Term, _: Term) -> Term:
    if not isinstance(redex, Rec):
        raise NoMatch(f"L7 needs a recursion, found {print_term(redex)}")
    return unfold(redex)


def _deterministic_choice(redex: Term, _: Term) -> Term:
    if not isinstance(redex, Sum) or not isinstance(redex.right, Par):
        raise NoMatch("DetChoice needs a choice whose right operand is a parallel composition")
    choice, par = redex.left, redex.right
    if not is_closed(choice):
        raise SideConditionViolated("DetChoice needs a closed left operand")
    shared = sort(choice) & sort(par)
    if shared:
        raise SideConditionViolated(f"DetChoice needs disjoint sorts, both use {', '.join(sorted(shared))}")
    lts = explore(choice)
    if lts.truncated:
        raise SideConditionViolated("determinism of the left operand could not be established within the bounds")
    if not is_deterministic(lts):
        raise SideConditionViolated("DetChoice needs a deterministic left operand")
    return Par(Sum(choice, par.left), Sum(choice, par.right), par.sync | sort(choice))


def _rename_apart(redex: Term, whole: Term) -> Term:
    """Replace every name of the redex by a fresh one and undo the renaming outside."""
    fresh = FreshNames(alphabet(whole))
    renaming = {name: next(fresh) for name in sorted(alphabet(redex))}
    if not renaming:
        raise NoMatch("Rename needs a subterm with visible actions")
    undo = Relabelling.of({copy: name for name, copy in renaming.items()})
    return Relabel(rename_actions(redex, renaming), undo)


LAWS: Dict[LawId, Law] = {
    law.law_id: law
    for law in (
        Law(LawId.L1, "m |> (n |> Q) ~ n |> (m |> Q)", _swap_reads),
        Law(LawId.L2, "a |> (m |> Q) ~ m |> Q and !a |> (m |> Q) ~ !a |> Q, m a copy of a", _absorb_read),
        Law(LawId.L3, "(m |> Q) + R ~ m |> (Q + R)", _read_out_of_choice),
        Law(LawId.L4, "a |> (Q1 |[A]| Q2) ~ (a |> Q1) |[A,a]| (a |> Q2), a not in sort(Q1 |[A]| Q2)", _distribute_read),
        Law(LawId.L5, "(m |> Q)[F] ~ F(m) |> Q[F]", _read_out_of_relabel),
        Law(LawId.L6, "Q[F][G] ~ Q[G.F]", _merge_relabels),
        Law(LawId.L7, "rec x. Q ~ Q{rec x. Q/x}", _unfold),
        Law(
            LawId.DET_CHOICE,
            "Q + (R1 |[A]| R2) ~ (Q + R1) |[A u sort(Q)]| (Q + R2), Q deterministic, sorts disjoint",
            _deterministic_choice,
        ),
        Law(LawId.RENAME, "Q ~ Q'[undo] with Q' using fresh names only", _rename_apart),
    )
}


def apply_law(term: Term, law: LawId, path: Path = ()) -> Term:
    try:
        redex = subterm_at(term, path)
    except IndexError as error:
        raise NoMatch(f"no subterm at this position: {error}", path=path) from None
    try:
        replacement = LAWS[law].rewrite(redex, term)
    except WorkbenchError as error:
        error.details.setdefault("path", path)
        raise
    logger.debug(f"{law.value} rewrote {print_term(redex)} into {print_term(replacement)}")
    return replace_at(term, path, replacement)


def parse_path(text: str) -> Path:
    """'0.1.0' -> (0, 1, 0); the empty string is the root."""
    text = text.strip()
    if not text or text == "root":
        return ()
    try:
        return tuple(int(step) for step in text.split("."))
    except ValueError:
        raise NoMatch(f"malformed position {text!r}; expected child indices like 0.1.0") from None
