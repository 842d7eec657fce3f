import re
from dataclasses import dataclass
from typing import AbstractSet, FrozenSet, Iterable, Iterator, Set

TAU = "tau"

_IDENTIFIER = re.compile(r"[a-z_][A-Za-z0-9_]*\Z")


def is_action_name(name: str) -> bool:
    """True for names usable as visible actions in the concrete syntax."""
    return bool(_IDENTIFIER.match(name)) and name != TAU


@dataclass(frozen=True, slots=True)
class Action:
    """A visible action or tau, either lazy (may delay one time unit) or urgent."""

    name: str
    urgent: bool = False

    def __post_init__(self):
        if not self.name:
            raise ValueError("action name must be non-empty")

    @property
    def is_tau(self) -> bool:
        return self.name == TAU

    @property
    def is_visible(self) -> bool:
        return self.name != TAU

    def lazy(self) -> "Action":
        return self if not self.urgent else Action(self.name, False)

    def urgentified(self) -> "Action":
        return self if self.urgent else Action(self.name, True)

    def sort_key(self):
        # tau first, then lexicographic; urgency does not take part
        return (0, "") if self.is_tau else (1, self.name)

    def __str__(self) -> str:
        return f"!{self.name}" if self.urgent else self.name


def tau(urgent: bool = False) -> Action:
    return Action(TAU, urgent)


def ordered(actions: Iterable[Action]) -> list:
    """List actions in the canonical total order (tau first, then by name)."""
    return sorted(actions, key=lambda action: (action.sort_key(), action.urgent))


def is_legal_read_set(ms: AbstractSet[Action]) -> bool:
    """No action may occur both lazy and urgent in one read set."""
    names = [action.name for action in ms]
    return len(names) == len(set(names))


def urgentify_readset(ms: AbstractSet[Action]) -> FrozenSet[Action]:
    """Replace every lazy member by its urgent copy."""
    return frozenset(action.urgentified() for action in ms)


class FreshNames:
    """
    Generator of action names disjoint from every name seen so far.

    Names are `<base><n>` with a running suffix counter; every generated name
    is remembered so two calls never collide.
    """

    def __init__(self, used: Iterable[str] = (), base: str = "e"):
        self._used: Set[str] = set(used)
        self._base = base
        self._counter = 0

    def reserve(self, names: Iterable[str]) -> None:
        self._used.update(names)

    def __iter__(self) -> Iterator[str]:
        return self

    def __next__(self) -> str:
        while True:
            self._counter += 1
            candidate = f"{self._base}{self._counter}"
            if candidate not in self._used:
                self._used.add(candidate)
                return candidate
