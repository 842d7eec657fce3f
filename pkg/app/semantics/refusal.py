from dataclasses import dataclass
from typing import AbstractSet, Any, Dict, FrozenSet, Iterable

from app.core.actions import TAU
from app.core.relabelling import Relabelling


@dataclass(frozen=True, slots=True)
class RefusalSet:
    """
    A finite or cofinite set of visible action names.

    `cofinite=True` means "every visible action except `names`"; the full
    set of visible actions is the cofinite set with no exceptions.
    """

    cofinite: bool
    names: FrozenSet[str] = frozenset()

    @classmethod
    def finite(cls, names: Iterable[str]) -> "RefusalSet":
        return cls(False, frozenset(names))

    @classmethod
    def all_but(cls, names: Iterable[str]) -> "RefusalSet":
        return cls(True, frozenset(names))

    @classmethod
    def parse(cls, text: str) -> "RefusalSet":
        """`1`, `{a,b}` or `-{a}` (everything but a)."""
        text = text.strip()
        if text == "1":
            return FULL
        cofinite = text.startswith("-")
        body = text[1:] if cofinite else text
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"not a refusal set: {text!r}")
        names = [name.strip() for name in body[1:-1].split(",") if name.strip()]
        return cls(cofinite, frozenset(names))

    @property
    def is_full(self) -> bool:
        return self.cofinite and not self.names

    @property
    def is_empty(self) -> bool:
        return not self.cofinite and not self.names

    def __contains__(self, name: str) -> bool:
        return (name not in self.names) if self.cofinite else (name in self.names)

    def union(self, other: "RefusalSet") -> "RefusalSet":
        if self.cofinite and other.cofinite:
            return RefusalSet(True, self.names & other.names)
        if self.cofinite:
            return RefusalSet(True, self.names - other.names)
        if other.cofinite:
            return RefusalSet(True, other.names - self.names)
        return RefusalSet(False, self.names | other.names)

    def intersection(self, other: "RefusalSet") -> "RefusalSet":
        if self.cofinite and other.cofinite:
            return RefusalSet(True, self.names | other.names)
        if self.cofinite:
            return RefusalSet(False, other.names - self.names)
        if other.cofinite:
            return RefusalSet(False, self.names - other.names)
        return RefusalSet(False, self.names & other.names)

    def complement(self) -> "RefusalSet":
        return RefusalSet(not self.cofinite, self.names)

    def difference(self, other: "RefusalSet") -> "RefusalSet":
        return self.intersection(other.complement())

    def without(self, names: AbstractSet[str]) -> "RefusalSet":
        return self.difference(RefusalSet.finite(names))

    def issubset(self, other: "RefusalSet") -> bool:
        return self.difference(other).is_empty

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __le__ = issubset

    def preimage(self, relabelling: Relabelling) -> "RefusalSet":
        """Phi^-1(X u {tau}) \\ {tau}: the visible names whose image is refused or hidden."""
        keys = relabelling.keys
        mapped = {src for src, dst in relabelling.pairs if dst == TAU or dst in self}
        return self.without(keys) | RefusalSet.finite(mapped)

    def image_refusal(self, relabelling: Relabelling) -> "RefusalSet":
        """The largest X with Phi^-1(X) contained in this set (hidden names ignored)."""
        support = relabelling.support
        inside = {name for name in support if all(src in self for src in relabelling.preimage(name))}
        return self.without(support) | RefusalSet.finite(inside)

    def to_dict(self) -> Dict[str, Any]:
        return {"polarity": "cofinite" if self.cofinite else "finite", "names": sorted(self.names)}

    def __str__(self) -> str:
        if self.is_full:
            return "1"
        listed = ",".join(sorted(self.names))
        return f"-{{{listed}}}" if self.cofinite else f"{{{listed}}}"


FULL = RefusalSet(True, frozenset())
EMPTY = RefusalSet(False, frozenset())
