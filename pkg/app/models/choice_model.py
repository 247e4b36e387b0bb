"""Scripts that resolve the integer choices of an execution."""

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from app.core.config import settings
from app.core.constants import ChoiceLabel
from app.domain.exceptions import ScriptExhausted


class ExhaustionPolicy(str, Enum):
    FAIL_TEST = "fail-test"
    RANDOM = "random"


@dataclass
class ChoiceScript:
    """
    Ordered integer choices consumed left to right.

    Past the end, FAIL_TEST raises ScriptExhausted and RANDOM draws from a
    Mersenne Twister (random.Random) seeded with `seed`: addresses uniformly
    from [1, max_address], everything else from [min_value, max_value].
    """

    values: list[int] = field(default_factory=list)
    policy: ExhaustionPolicy = ExhaustionPolicy.FAIL_TEST
    seed: Optional[int | str] = None
    min_value: int = field(default_factory=lambda: settings.execution.min_value)
    max_value: int = field(default_factory=lambda: settings.execution.max_value)
    max_address: int = field(default_factory=lambda: settings.execution.max_address)
    consumed: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._rng = random.Random(self.seed)

    @classmethod
    def fixed(cls, values: list[int]) -> "ChoiceScript":
        return cls(values=list(values), policy=ExhaustionPolicy.FAIL_TEST)

    @classmethod
    def seeded(cls, seed: int | str, values: Optional[list[int]] = None) -> "ChoiceScript":
        return cls(values=list(values or []), policy=ExhaustionPolicy.RANDOM, seed=seed)

    @property
    def position(self) -> int:
        return len(self.consumed)

    def next(self, label: str = "") -> int:
        if self.position < len(self.values):
            value = self.values[self.position]
        elif self.policy is ExhaustionPolicy.RANDOM:
            value = self._draw(label)
        else:
            raise ScriptExhausted(self.position, label or "value")
        self.consumed.append(value)
        return value

    def next_bool(self) -> bool:
        return self.next(ChoiceLabel.BRANCH.value) != 0

    def _draw(self, label: str) -> int:
        if label == ChoiceLabel.ADDRESS.value:
            return self._rng.randint(1, self.max_address)
        if label == ChoiceLabel.BRANCH.value:
            return self._rng.randint(0, 1)
        return self._rng.randint(self.min_value, self.max_value)
