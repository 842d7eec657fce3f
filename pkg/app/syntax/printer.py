from app.core.actions import ordered
from app.core.terms import Nil, Par, Prefix, ReadPrefix, ReadSet, Rec, Relabel, Sum, Term, Var

# binding strength, loosest first
_SUM, _PAR, _PREFIXED, _RELABEL, _ATOM = range(5)


def print_term(term: Term) -> str:
    """Canonical concrete syntax; `parse_term(print_term(t)) == t` for every parsed term."""
    return _render(term, _SUM)


def _render(term: Term, context: int) -> str:
    text, level = _show(term)
    return f"({text})" if level < context else text


def _show(term: Term):
    if isinstance(term, Nil):
        return "0", _ATOM
    if isinstance(term, Var):
        return term.name, _ATOM
    if isinstance(term, Prefix):
        return f"{term.action}.{_render(term.body, _PREFIXED)}", _PREFIXED
    if isinstance(term, ReadPrefix):
        return f"{term.action} |> {_render(term.body, _PREFIXED)}", _PREFIXED
    if isinstance(term, ReadSet):
        members = ",".join(str(action) for action in ordered(term.actions))
        return f"{{{members}}} |> {_render(term.body, _PREFIXED)}", _PREFIXED
    if isinstance(term, Rec):
        return f"rec {term.var}. {_render(term.body, _PREFIXED)}", _PREFIXED
    if isinstance(term, Sum):
        return f"{_render(term.left, _SUM)} + {_render(term.right, _PAR)}", _SUM
    if isinstance(term, Par):
        sync = ",".join(sorted(term.sync))
        return f"{_render(term.left, _PAR)} |[{sync}]| {_render(term.right, _PREFIXED)}", _PAR
    if isinstance(term, Relabel):
        return f"{_render(term.body, _RELABEL)}{term.relabelling}", _RELABEL
    raise TypeError(f"not a term: {term!r}")
