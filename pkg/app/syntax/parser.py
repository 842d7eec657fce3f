"""
Parser for term programs.

A program is either a single term or a list of equations `Name <= term`
followed by `main = term`. Equation references are desugared into nested
`rec` binders (each equation `N` becomes `rec N. body`, with references to
equations that are not yet being defined substituted in place), so the
result is always one closed term.

All constraints the grammar cannot express are checked while the syntax tree
is converted, so every error carries the line and column of the construct
that violates it.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence

from lark import Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput

from app.core.actions import Action, is_legal_read_set
from app.core.errors import (
    FreeVariable,
    IllegalReadSet,
    ParseError,
    ShadowedBinder,
    UnguardedRecursion,
    UnknownName,
    UrgencyPosition,
    WrongLanguage,
)
from app.core.predicates import is_guarded, is_initial, recursion_violation, stratification_violation
from app.core.relabelling import Relabelling
from app.core.terms import (
    NIL,
    Language,
    Par,
    Prefix,
    ReadPrefix,
    ReadSet,
    Rec,
    Relabel,
    Sum,
    Term,
    Var,
    free_vars,
    substitute,
)
from app.syntax.grammar import term_parser

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Equation:
    name: str
    body: Term
    line: Optional[int] = None
    column: Optional[int] = None


@dataclass(frozen=True)
class SourceProgram:
    """Parsed program: the raw equations and main term plus the desugared closed term."""

    equations: List[Equation]
    main: Term
    language: Optional[Language]
    term: Term = field(compare=False)


def _position(node) -> Dict[str, Optional[int]]:
    if isinstance(node, Token):
        return {"line": node.line, "column": node.column}
    meta = getattr(node, "meta", None)
    if meta is None or getattr(meta, "empty", True):
        return {"line": None, "column": None}
    return {"line": meta.line, "column": meta.column}


def _action(tree: Tree) -> Action:
    tokens = tree.children
    urgent = any(token.type == "BANG" for token in tokens)
    return Action(tokens[-1].value, urgent)


class _Builder:
    """Converts a lark tree into a term, checking every context constraint."""

    def __init__(self, language: Optional[Language], equation_names: FrozenSet[str], allow_open: bool):
        self.language = language
        self.equation_names = equation_names
        self.allow_open = allow_open
        self.seen: Optional[Language] = None

    def _language(self, node, used: Language) -> None:
        expected = self.language or self.seen
        if expected is not None and expected is not used:
            construct = "read-set prefix" if used is Language.S else "read-action prefix"
            raise WrongLanguage(f"{construct} not allowed in a {expected.value.upper()} term", **_position(node))
        self.seen = used

    def build(self, node, bound: FrozenSet[str]) -> Term:
        kind = node.data
        if kind == "nil":
            return NIL
        if kind == "ref":
            return self._reference(node.children[0], bound)
        if kind == "prefix":
            action = _action(node.children[0])
            body = self.build(node.children[1], bound)
            if not is_initial(body):
                raise UrgencyPosition(
                    f"urgent action below the prefix {action.name}: a prefix body must be initial",
                    **_position(node),
                )
            return Prefix(action, body)
        if kind == "read_prefix":
            self._language(node, Language.R)
            return ReadPrefix(_action(node.children[0]), self.build(node.children[1], bound))
        if kind == "read_set":
            self._language(node, Language.S)
            members = node.children[0].children if node.children[0] is not None else []
            actions = [_action(member) for member in members]
            read_set = frozenset(actions)
            if not is_legal_read_set(read_set):
                raise IllegalReadSet(
                    "a read set cannot contain a lazy and an urgent copy of the same action", **_position(node)
                )
            return ReadSet(read_set, self.build(node.children[1], bound))
        if kind == "choice":
            return Sum(self.build(node.children[0], bound), self.build(node.children[1], bound))
        if kind == "parallel":
            names = node.children[1]
            sync = frozenset(token.value for token in names.children) if names is not None else frozenset()
            return Par(self.build(node.children[0], bound), self.build(node.children[2], bound), sync)
        if kind == "relabel":
            renames = node.children[1]
            mapping: Dict[str, str] = {}
            for rename in renames.children if renames is not None else []:
                src, dst = rename.children
                if src.value in mapping:
                    raise ParseError(f"{src.value} is relabelled twice", **_position(src))
                mapping[src.value] = dst.value
            return Relabel(self.build(node.children[0], bound), Relabelling.of(mapping))
        if kind == "rec":
            binder, body_node = node.children
            if binder.value in bound:
                raise ShadowedBinder(f"rec {binder.value} shadows an enclosing binder", **_position(binder))
            if binder.value in self.equation_names:
                raise ShadowedBinder(f"rec {binder.value} shadows an equation name", **_position(binder))
            body = self.build(body_node, bound | {binder.value})
            if not is_guarded(binder.value, body, strict=True):
                raise UnguardedRecursion(
                    f"variable {binder.value} must occur below an action prefix", **_position(node)
                )
            return Rec(binder.value, body)
        raise ParseError(f"unexpected construct {kind}", **_position(node))

    def _reference(self, token: Token, bound: FrozenSet[str]) -> Term:
        name = token.value
        if name in bound:
            return Var(name)
        if token.type == "UNAME":
            if name in self.equation_names:
                return Var(name)
            raise UnknownName(f"no equation named {name}", **_position(token))
        if self.allow_open:
            return Var(name)
        raise FreeVariable(f"variable {name} is not bound by any rec", **_position(token))


def desugar(equations: Mapping[str, Term], main: Term) -> Term:
    """
    Turn an equation system into one closed term.

    References are `Var(name)` nodes; `close` resolves each equation in the
    context of the equations already being defined above it, which keep
    their names as bound variables.
    """

    def close(name: str, stack: Sequence[str]) -> Term:
        body = resolve(equations[name], tuple(stack) + (name,))
        return Rec(name, body) if name in free_vars(body) else body

    def resolve(term: Term, stack: Sequence[str]) -> Term:
        for other in sorted(free_vars(term) & set(equations)):
            if other not in stack:
                term = substitute(term, other, close(other, stack))
        return term

    return resolve(main, ())


def _syntax_error(error: UnexpectedInput) -> ParseError:
    line = getattr(error, "line", None)
    column = getattr(error, "column", None)
    if isinstance(error, UnexpectedEOF) or line is None or line < 0:
        return ParseError("unexpected end of input", None, None)
    if isinstance(error, UnexpectedCharacters):
        return ParseError(f"unexpected character {error.char!r}", line, column)
    token = getattr(error, "token", None)
    text = getattr(token, "value", "") or "end of input"
    return ParseError(f"unexpected {text!r}", line, column)


def parse(text: str, language: Optional[Language] = None, allow_open: bool = False) -> SourceProgram:
    """
    Parse a program (or a single term) in the given language.

    With `language=None` the language is inferred from the first read
    construct and mixing read prefixes with read sets is rejected.
    """
    try:
        tree = term_parser.parse(text)
    except UnexpectedInput as error:
        raise _syntax_error(error) from None

    equation_nodes = tree.children[:-1] if tree.data == "equations" else []
    names: Dict[str, Token] = {}
    for node in equation_nodes:
        token = node.children[0]
        if token.value in names:
            raise ParseError(f"equation {token.value} is defined twice", **_position(token))
        names[token.value] = token

    builder = _Builder(language, frozenset(names), allow_open)
    equations = [
        Equation(node.children[0].value, builder.build(node.children[1], frozenset()), **_position(node))
        for node in equation_nodes
    ]
    main = builder.build(tree.children[-1], frozenset())
    if not equations:
        term = main
    else:
        term = desugar({equation.name: equation.body for equation in equations}, main)
        _check_desugared(term, equations)
    language = language or builder.seen
    logger.debug(f"Parsed {len(equations)} equations, language {language}")
    return SourceProgram(equations, main, language, term)


def _check_desugared(term: Term, equations: List[Equation]) -> None:
    by_name = {equation.name: equation for equation in equations}
    violation = recursion_violation(term)
    if violation is not None:
        equation = by_name.get(violation.subterm.var)
        where = {"line": equation.line, "column": equation.column} if equation else {}
        raise UnguardedRecursion(f"equation {violation.subterm.var} is not guarded by an action prefix", **where)
    violation = stratification_violation(term)
    if violation is not None:
        raise UrgencyPosition("an equation with urgent actions is referenced below a prefix")


def parse_term(text: str, language: Optional[Language] = None, allow_open: bool = False) -> Term:
    return parse(text, language, allow_open).term
