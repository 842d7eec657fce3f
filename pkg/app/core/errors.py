"""Exception hierarchy shared by every layer of the workbench.

Each error carries a stable machine-readable ``kind`` that the CLI and the
HTTP API report as ``error.kind``.
"""

from typing import Any, Dict, Optional, Tuple

Path = Tuple[int, ...]


def format_path(path: Path) -> str:
    return ".".join(str(step) for step in path)


class WorkbenchError(Exception):
    kind = "workbench_error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"kind": self.kind, "message": self.message}
        for key, value in self.details.items():
            if value is None:
                continue
            payload[key] = format_path(value) if key == "path" else value
        return payload


class ParseError(WorkbenchError):
    """Raised for any rejected input text; always positioned."""

    kind = "syntax_error"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}", line=line, column=column)
        self.line = line
        self.column = column


class UnguardedRecursion(ParseError):
    kind = "unguarded_recursion"


class IllegalReadSet(ParseError):
    kind = "illegal_read_set"


class UrgencyPosition(ParseError):
    kind = "urgency_position"


class UnknownName(ParseError):
    kind = "unknown_name"


class ShadowedBinder(ParseError):
    kind = "shadowed_binder"


class FreeVariable(ParseError):
    kind = "free_variable"


class WrongLanguage(ParseError):
    kind = "wrong_language"


class OpenTerm(WorkbenchError):
    kind = "open_term"


class ImproperInput(WorkbenchError):
    kind = "improper_input"


class NotRnf(WorkbenchError):
    kind = "not_rnf"


class OutsideFragment(WorkbenchError):
    kind = "outside_fragment"


class NoMatch(WorkbenchError):
    kind = "no_match"


class SideConditionViolated(WorkbenchError):
    kind = "side_condition_violated"


class NotSafe(WorkbenchError):
    kind = "not_safe"


class NetFormatError(WorkbenchError):
    kind = "net_format"
