"""Immutable term trees shared by the read-action and read-set algebras.

Both languages use the same node classes; a term is a read-action term when it
contains `ReadPrefix` nodes and a read-set term when it contains `ReadSet`
nodes (read-free terms belong to both). Subterm positions are tuples of child
indices: unary nodes have child 0, `Sum`/`Par` have children 0 and 1.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, FrozenSet, Iterator, Tuple, Union

from app.core.actions import Action
from app.core.relabelling import Relabelling

Path = Tuple[int, ...]


class Language(str, Enum):
    R = "r"
    S = "s"


@dataclass(frozen=True, slots=True)
class Nil:
    pass


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Prefix:
    action: Action
    body: "Term"


@dataclass(frozen=True, slots=True)
class ReadPrefix:
    action: Action
    body: "Term"


@dataclass(frozen=True, slots=True)
class ReadSet:
    actions: FrozenSet[Action]
    body: "Term"


@dataclass(frozen=True, slots=True)
class Sum:
    left: "Term"
    right: "Term"


@dataclass(frozen=True, slots=True)
class Par:
    left: "Term"
    right: "Term"
    sync: FrozenSet[str] = frozenset()


@dataclass(frozen=True, slots=True)
class Relabel:
    body: "Term"
    relabelling: Relabelling


@dataclass(frozen=True, slots=True)
class Rec:
    var: str
    body: "Term"


Term = Union[Nil, Var, Prefix, ReadPrefix, ReadSet, Sum, Par, Relabel, Rec]

NIL = Nil()


def children(term: Term) -> Tuple[Term, ...]:
    if isinstance(term, (Nil, Var)):
        return ()
    if isinstance(term, (Sum, Par)):
        return (term.left, term.right)
    return (term.body,)


def with_children(term: Term, new: Tuple[Term, ...]) -> Term:
    """Rebuild `term` with the given children, keeping all other fields."""
    if isinstance(term, (Nil, Var)):
        return term
    if isinstance(term, Sum):
        return Sum(new[0], new[1])
    if isinstance(term, Par):
        return Par(new[0], new[1], term.sync)
    if isinstance(term, Prefix):
        return Prefix(term.action, new[0])
    if isinstance(term, ReadPrefix):
        return ReadPrefix(term.action, new[0])
    if isinstance(term, ReadSet):
        return ReadSet(term.actions, new[0])
    if isinstance(term, Relabel):
        return Relabel(new[0], term.relabelling)
    return Rec(term.var, new[0])


def subterms(term: Term, path: Path = ()) -> Iterator[Tuple[Path, Term]]:
    """Pre-order walk yielding every subterm with its position."""
    yield path, term
    for index, child in enumerate(children(term)):
        yield from subterms(child, path + (index,))


def subterm_at(term: Term, path: Path) -> Term:
    for index in path:
        kids = children(term)
        if index >= len(kids):
            raise IndexError(f"no child {index} below {type(term).__name__}")
        term = kids[index]
    return term


def replace_at(term: Term, path: Path, replacement: Term) -> Term:
    if not path:
        return replacement
    kids = list(children(term))
    if path[0] >= len(kids):
        raise IndexError(f"no child {path[0]} below {type(term).__name__}")
    kids[path[0]] = replace_at(kids[path[0]], path[1:], replacement)
    return with_children(term, tuple(kids))


def free_vars(term: Term) -> FrozenSet[str]:
    if isinstance(term, Var):
        return frozenset({term.name})
    if isinstance(term, Rec):
        return free_vars(term.body) - {term.var}
    result: FrozenSet[str] = frozenset()
    for child in children(term):
        result |= free_vars(child)
    return result


def is_closed(term: Term) -> bool:
    return not free_vars(term)


def substitute(term: Term, var: str, replacement: Term) -> Term:
    """
    Replace every free occurrence of `var` by `replacement`.

    The replacement is closed whenever the semantics unfolds a recursion and
    the parser rejects shadowed binders, so no renaming is ever needed.
    """
    if isinstance(term, Var):
        return replacement if term.name == var else term
    if isinstance(term, Nil):
        return term
    if isinstance(term, Rec) and term.var == var:
        return term
    return with_children(term, tuple(substitute(child, var, replacement) for child in children(term)))


def unfold(term: Rec) -> Term:
    """Q{rec x.Q/x}."""
    return substitute(term.body, term.var, term)


def map_actions(term: Term, fn: Callable[[Action], Action]) -> Term:
    """Apply `fn` to every action occurring in a prefix, read prefix or read set."""
    if isinstance(term, Prefix):
        return Prefix(fn(term.action), map_actions(term.body, fn))
    if isinstance(term, ReadPrefix):
        return ReadPrefix(fn(term.action), map_actions(term.body, fn))
    if isinstance(term, ReadSet):
        return ReadSet(frozenset(fn(action) for action in term.actions), map_actions(term.body, fn))
    return with_children(term, tuple(map_actions(child, fn) for child in children(term)))


def rename_actions(term: Term, renaming: dict) -> Term:
    """
    Rename visible names everywhere: actions, sync sets and relabellings.

    Names missing from `renaming` are kept.
    """

    def rename(name: str) -> str:
        return renaming.get(name, name)

    if isinstance(term, (Nil, Var)):
        return term
    if isinstance(term, Prefix):
        return Prefix(Action(rename(term.action.name), term.action.urgent), rename_actions(term.body, renaming))
    if isinstance(term, ReadPrefix):
        return ReadPrefix(
            Action(rename(term.action.name), term.action.urgent), rename_actions(term.body, renaming)
        )
    if isinstance(term, ReadSet):
        return ReadSet(
            frozenset(Action(rename(action.name), action.urgent) for action in term.actions),
            rename_actions(term.body, renaming),
        )
    if isinstance(term, Par):
        return Par(
            rename_actions(term.left, renaming),
            rename_actions(term.right, renaming),
            frozenset(rename(name) for name in term.sync),
        )
    if isinstance(term, Relabel):
        mapping = {rename(src): rename(dst) for src, dst in term.relabelling.pairs}
        return Relabel(rename_actions(term.body, renaming), Relabelling.of(mapping))
    return with_children(term, tuple(rename_actions(child, renaming) for child in children(term)))


def language_of(term: Term) -> Language:
    """Read-set terms are S terms; everything else is treated as an R term."""
    for _, sub in subterms(term):
        if isinstance(sub, ReadSet):
            return Language.S
    return Language.R


def size(term: Term) -> int:
    return 1 + sum(size(child) for child in children(term))
