from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

from app.core.actions import Action
from app.semantics.refusal import RefusalSet


class StepKind(str, Enum):
    ORDINARY = "ordinary"
    READ = "read"
    ACTION = "action"  # the single action relation of the read-set algebra
    TIME = "time"


@dataclass(frozen=True, slots=True)
class StepLabel:
    """
    Label of an explored transition.

    Action labels are always lazy: performing an action never reveals whether
    it was urgent. Time labels carry the maximal refusal set.
    """

    kind: StepKind
    action: Optional[Action] = None
    refusal: Optional[RefusalSet] = None

    @classmethod
    def ordinary(cls, action: Action) -> "StepLabel":
        return cls(StepKind.ORDINARY, action.lazy())

    @classmethod
    def read(cls, action: Action) -> "StepLabel":
        return cls(StepKind.READ, action.lazy())

    @classmethod
    def act(cls, action: Action) -> "StepLabel":
        return cls(StepKind.ACTION, action.lazy())

    @classmethod
    def time(cls, refusal: RefusalSet) -> "StepLabel":
        return cls(StepKind.TIME, refusal=refusal)

    @property
    def is_time(self) -> bool:
        return self.kind is StepKind.TIME

    @property
    def is_tau(self) -> bool:
        return self.action is not None and self.action.is_tau

    @property
    def is_full_time(self) -> bool:
        return self.kind is StepKind.TIME and self.refusal is not None and self.refusal.is_full

    def to_dict(self) -> Dict[str, Any]:
        if self.is_time:
            return {"kind": self.kind.value, "refusal": self.refusal.to_dict()}
        return {"kind": self.kind.value, "action": self.action.name}

    def __str__(self) -> str:
        if self.is_time:
            return str(self.refusal)
        if self.kind is StepKind.READ:
            return f"{self.action.name}?"
        return self.action.name
