from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple

from app.core.actions import TAU, Action


@dataclass(frozen=True, slots=True)
class Relabelling:
    """
    A general relabelling function Phi, stored as its finite non-identity part.

    Names outside `pairs` are mapped to themselves and tau is always fixed,
    so tau never occurs as a key. Identity pairs are dropped on construction,
    which makes structural equality coincide with functional equality.
    """

    pairs: Tuple[Tuple[str, str], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, str]) -> "Relabelling":
        if TAU in mapping:
            raise ValueError("tau cannot be relabelled")
        return cls(tuple(sorted((src, dst) for src, dst in mapping.items() if src != dst)))

    @classmethod
    def hiding(cls, names: Iterable[str]) -> "Relabelling":
        """Phi_A: every name in A becomes tau."""
        return cls.of({name: TAU for name in names})

    def as_dict(self) -> Dict[str, str]:
        return dict(self.pairs)

    def __call__(self, name: str) -> str:
        for src, dst in self.pairs:
            if src == name:
                return dst
        return name

    def apply(self, action: Action) -> Action:
        return Action(self(action.name), action.urgent)

    @property
    def keys(self) -> FrozenSet[str]:
        return frozenset(src for src, _ in self.pairs)

    @property
    def support(self) -> FrozenSet[str]:
        """Visible names whose preimage may differ from themselves."""
        names = {src for src, _ in self.pairs}
        names.update(dst for _, dst in self.pairs if dst != TAU)
        return frozenset(names)

    @property
    def hidden(self) -> FrozenSet[str]:
        return frozenset(src for src, dst in self.pairs if dst == TAU)

    def preimage(self, name: str) -> FrozenSet[str]:
        """Phi^-1(name) restricted to visible names."""
        result = {src for src, dst in self.pairs if dst == name}
        if name != TAU and name not in self.keys:
            result.add(name)
        return frozenset(result)

    def image_base(self) -> FrozenSet[str]:
        """ib(Phi) = {a | {} != Phi^-1(a) != {a}}."""
        return frozenset(dst for src, dst in self.pairs if dst != TAU and dst != src)

    def then(self, outer: "Relabelling") -> "Relabelling":
        """The composition outer . self (apply self first)."""
        names = self.keys | outer.keys
        return Relabelling.of({name: outer(self(name)) for name in names})

    def __str__(self) -> str:
        return "[" + ", ".join(f"{src}->{dst}" for src, dst in self.pairs) + "]"
