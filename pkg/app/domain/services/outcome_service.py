"""Outcome algebra: composition, satisfaction, navigation and finitary projection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional

from app.domain.exceptions import NonFinitaryOutcome
from app.models.choice_model import ChoiceScript
from app.models.outcome_model import (
    Angelic,
    AtBool,
    AtInt,
    Demonic,
    Here,
    IndexDomain,
    Msg,
    Mutator,
    Outcome,
    Single,
    Step,
)


Postcondition = Callable[[Any, Any], bool]


# Constructors and combinators
def top() -> Demonic:
    return Demonic(IndexDomain.EMPTY)


def bot(reason: Optional[str] = None) -> Angelic:
    return Angelic(IndexDomain.EMPTY, reason=reason)


def single(state: Any, answer: Any = None) -> Single:
    return Single(state, answer)


def demonic2(left: Outcome, right: Outcome) -> Demonic:
    return Demonic(IndexDomain.BOOL, lambda flag: left if flag else right)


def angelic2(left: Outcome, right: Outcome) -> Angelic:
    return Angelic(IndexDomain.BOOL, lambda flag: left if flag else right)


def demonic_bool(branch: Callable[[bool], Outcome], label: str = "") -> Demonic:
    """Lazy binary demonic choice: branch(True) and branch(False) are built on demand."""
    return Demonic(IndexDomain.BOOL, branch, label)


def demonic_int(branch: Callable[[int], Outcome], label: str = "") -> Demonic:
    return Demonic(IndexDomain.INT, branch, label)


def message(text: str, rest: Outcome) -> Msg:
    return Msg(text, rest)


def seq(outcome: Outcome, k: Callable[[Any], Mutator]) -> Outcome:
    """Run k(answer) on every leaf; choice nodes are rebuilt lazily around the continuation."""
    if isinstance(outcome, Single):
        return k(outcome.answer)(outcome.state)
    if isinstance(outcome, Msg):
        return Msg(outcome.text, seq(outcome.rest, k))
    if outcome.index is IndexDomain.EMPTY:
        return outcome
    inner = outcome.branch
    if isinstance(outcome, Demonic):
        return Demonic(outcome.index, lambda i: seq(inner(i), k), outcome.label)
    return Angelic(outcome.index, lambda i: seq(inner(i), k), outcome.label, outcome.reason)


def bind(outcome: Outcome, f: Callable[[Any, Any], Outcome]) -> Outcome:
    """seq with the continuation taking (state, answer)."""
    return seq(outcome, lambda answer: lambda state: f(state, answer))


def then(outcome: Outcome, f: Callable[[Any], Outcome]) -> Outcome:
    """seq ignoring answers."""
    return seq(outcome, lambda _answer: f)


def yield_(answer: Any) -> Mutator:
    return lambda state: Single(state, answer)


def noop() -> Mutator:
    return yield_(None)


def side_seq(first: Mutator, second: Mutator) -> Mutator:
    """Run first, then second, keeping first's answer."""
    return lambda state: bind(first(state), lambda s, a: then(second(s), lambda s2: Single(s2, a)))


def map_failures(outcome: Outcome, rename: Callable[[Optional[str]], str]) -> Outcome:
    """Rewrite the reason of every ⊥ leaf reachable before the first answer."""
    if isinstance(outcome, Single):
        return outcome
    if isinstance(outcome, Msg):
        return Msg(outcome.text, map_failures(outcome.rest, rename))
    if isinstance(outcome, Angelic) and outcome.index is IndexDomain.EMPTY:
        return bot(rename(outcome.reason))
    if outcome.index is IndexDomain.EMPTY:
        return outcome
    inner = outcome.branch
    if isinstance(outcome, Demonic):
        return Demonic(outcome.index, lambda i: map_failures(inner(i), rename), outcome.label)
    return Angelic(outcome.index, lambda i: map_failures(inner(i), rename), outcome.label, outcome.reason)


# Satisfaction
def satisfies(outcome: Outcome, post: Postcondition) -> bool:
    """Decide φ ⊨ Q on a finitary outcome."""
    while isinstance(outcome, Msg):
        outcome = outcome.rest
    if isinstance(outcome, Single):
        return bool(post(outcome.state, outcome.answer))
    if not outcome.index.finitary:
        raise NonFinitaryOutcome(outcome.index.value)
    if outcome.index is IndexDomain.EMPTY:
        return isinstance(outcome, Demonic)
    if isinstance(outcome, Demonic):
        return satisfies(outcome.branch(True), post) and satisfies(outcome.branch(False), post)
    return satisfies(outcome.branch(True), post) or satisfies(outcome.branch(False), post)


def is_finitary(outcome: Outcome) -> bool:
    while isinstance(outcome, Msg):
        outcome = outcome.rest
    if isinstance(outcome, Single):
        return True
    if not outcome.index.finitary:
        return False
    if outcome.index is IndexDomain.EMPTY:
        return True
    return is_finitary(outcome.branch(True)) and is_finitary(outcome.branch(False))


# Navigation and classifiers (Msg nodes are skipped)
def _strip(outcome: Outcome) -> Outcome:
    while isinstance(outcome, Msg):
        outcome = outcome.rest
    return outcome


def navigate(outcome: Outcome, step: Step) -> Optional[Outcome]:
    node = _strip(outcome)
    if isinstance(step, Here):
        return node
    if isinstance(node, Single):
        return None
    if isinstance(step, AtBool) and node.index is IndexDomain.BOOL:
        return node.branch(step.value)
    if isinstance(step, AtInt) and node.index is IndexDomain.INT:
        return node.branch(step.value)
    return None


def navigate_path(outcome: Outcome, steps: Iterable[Step]) -> Optional[Outcome]:
    node: Optional[Outcome] = outcome
    for step in steps:
        if node is None:
            return None
        node = navigate(node, step)
    return node


def is_single(outcome: Outcome) -> bool:
    return isinstance(_strip(outcome), Single)


def is_fail(outcome: Outcome) -> bool:
    node = _strip(outcome)
    return isinstance(node, Angelic) and node.index is IndexDomain.EMPTY


def is_block(outcome: Outcome) -> bool:
    node = _strip(outcome)
    return isinstance(node, Demonic) and node.index is IndexDomain.EMPTY


# Finitary projection and path reports
def resolve(outcome: Outcome, script: ChoiceScript) -> Outcome:
    """
    Replace every integer choice by the branch the script picks.

    Depth-first with the true branch first, so scripts read in program order.
    """
    if isinstance(outcome, Single):
        return outcome
    if isinstance(outcome, Msg):
        return Msg(outcome.text, resolve(outcome.rest, script))
    if outcome.index is IndexDomain.EMPTY:
        return outcome
    if outcome.index is IndexDomain.BOOL:
        when_true = resolve(outcome.branch(True), script)
        when_false = resolve(outcome.branch(False), script)
        chosen = lambda flag: when_true if flag else when_false  # noqa: E731
        if isinstance(outcome, Demonic):
            return Demonic(IndexDomain.BOOL, chosen, outcome.label)
        return Angelic(IndexDomain.BOOL, chosen, outcome.label, outcome.reason)
    return resolve(outcome.branch(script.next(outcome.label)), script)


def counterexample(outcome: Outcome, post: Postcondition) -> Optional[list[str]]:
    """Msg texts and failure reason along the first path refuting post; None when post holds."""
    texts: list[str] = []
    node = outcome
    while isinstance(node, Msg):
        texts.append(node.text)
        node = node.rest
    if isinstance(node, Single):
        return None if post(node.state, node.answer) else texts + ["final state does not satisfy the postcondition"]
    if not node.index.finitary:
        raise NonFinitaryOutcome(node.index.value)
    if node.index is IndexDomain.EMPTY:
        if isinstance(node, Demonic):
            return None
        return texts + [node.reason or "failure"]
    left = counterexample(node.branch(True), post)
    if isinstance(node, Demonic):
        if left is not None:
            return texts + left
        right = counterexample(node.branch(False), post)
        return None if right is None else texts + right
    if left is None:
        return None
    right = counterexample(node.branch(False), post)
    return None if right is None else texts + left


@dataclass(frozen=True)
class OutcomePath:
    lines: tuple[str, ...]
    kind: str  # "single", "blocked" or "failed"
    reason: Optional[str] = None


def paths(outcome: Outcome) -> list[OutcomePath]:
    """Every root-to-leaf path of a finitary outcome, true branches first."""
    found: list[OutcomePath] = []

    def walk(node: Outcome, prefix: tuple[str, ...]) -> None:
        while isinstance(node, Msg):
            prefix = prefix + (node.text,)
            node = node.rest
        if isinstance(node, Single):
            found.append(OutcomePath(prefix, "single"))
            return
        if not node.index.finitary:
            raise NonFinitaryOutcome(node.index.value)
        if node.index is IndexDomain.EMPTY:
            if isinstance(node, Demonic):
                found.append(OutcomePath(prefix, "blocked"))
            else:
                found.append(OutcomePath(prefix, "failed", node.reason))
            return
        walk(node.branch(True), prefix)
        walk(node.branch(False), prefix)

    walk(outcome, ())
    return found
