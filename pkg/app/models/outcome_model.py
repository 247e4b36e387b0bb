"""Outcome trees: answers interleaved with demonic and angelic choice."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Generic, TypeVar, Union


S = TypeVar("S")
A = TypeVar("A")


class IndexDomain(str, Enum):
    EMPTY = "empty"
    BOOL = "bool"
    INT = "int"
    OPAQUE = "opaque"

    @property
    def finitary(self) -> bool:
        return self in (IndexDomain.EMPTY, IndexDomain.BOOL)


def _no_branch(index: Any) -> "Outcome":
    raise ValueError(f"empty choice has no branch {index!r}")


@dataclass(frozen=True)
class Single(Generic[S, A]):
    state: S
    answer: A = None


@dataclass(frozen=True)
class Demonic:
    """Every branch must succeed; the empty demonic choice is ⊤."""

    index: IndexDomain
    branch: Callable[[Any], "Outcome"] = field(default=_no_branch, compare=False)
    label: str = field(default="", compare=False)


@dataclass(frozen=True)
class Angelic:
    """Some branch must succeed; the empty angelic choice is ⊥, optionally with a reason."""

    index: IndexDomain
    branch: Callable[[Any], "Outcome"] = field(default=_no_branch, compare=False)
    label: str = field(default="", compare=False)
    reason: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Msg:
    """Diagnostic text attached in front of an outcome; transparent to satisfaction."""

    text: str
    rest: "Outcome"


Outcome = Union[Single, Demonic, Angelic, Msg]

# Mutator[S, A]: state -> Outcome[S, A]
Mutator = Callable[[Any], Outcome]


@dataclass(frozen=True)
class AtBool:
    value: bool


@dataclass(frozen=True)
class AtInt:
    value: int


@dataclass(frozen=True)
class Here:
    pass


Step = Union[AtBool, AtInt, Here]
