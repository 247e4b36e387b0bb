"""Abstract syntax of the verified language. Every node is immutable."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

from app.core.constants import POINTS_TO


Location = Optional[tuple[int, int]]


def _loc() -> Location:
    return field(default=None, compare=False, repr=False)


# Expressions
@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


Expr = Union[IntLit, Var, Add, Sub]


# Boolean expressions
@dataclass(frozen=True)
class Eq:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Lt:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Not:
    operand: "BoolExpr"


BoolExpr = Union[Eq, Lt, Not]


# Assertions
@dataclass(frozen=True)
class BoolA:
    condition: BoolExpr


@dataclass(frozen=True)
class PredA:
    """p(fixed..., ?patterns...); the patterns bind variables on consumption."""

    predicate: str
    args: tuple[Expr, ...]
    patterns: tuple[str, ...] = ()
    loc: Location = _loc()

    @property
    def arity(self) -> int:
        return len(self.args) + len(self.patterns)


@dataclass(frozen=True)
class SepConj:
    left: "Assertion"
    right: "Assertion"


@dataclass(frozen=True)
class IfA:
    condition: BoolExpr
    then_branch: "Assertion"
    else_branch: "Assertion"


Assertion = Union[BoolA, PredA, SepConj, IfA]


def points_to(address: Expr, value: Expr | str) -> PredA:
    if isinstance(value, str):
        return PredA(POINTS_TO, (address,), (value,))
    return PredA(POINTS_TO, (address, value))


# Commands
@dataclass(frozen=True)
class Assign:
    target: str
    value: Expr
    loc: Location = _loc()


@dataclass(frozen=True)
class Seq:
    first: "Command"
    second: "Command"
    loc: Location = _loc()


@dataclass(frozen=True)
class If:
    condition: BoolExpr
    then_branch: "Command"
    else_branch: "Command"
    loc: Location = _loc()


@dataclass(frozen=True)
class While:
    condition: BoolExpr
    invariant: Assertion
    body: "Command"
    loc: Location = _loc()


@dataclass(frozen=True)
class Call:
    routine: str
    args: tuple[Expr, ...]
    target: Optional[str] = None
    loc: Location = _loc()


@dataclass(frozen=True)
class Malloc:
    target: str
    size: int
    loc: Location = _loc()


@dataclass(frozen=True)
class Read:
    target: str
    address: Expr
    loc: Location = _loc()


@dataclass(frozen=True)
class Write:
    address: Expr
    value: Expr
    loc: Location = _loc()


@dataclass(frozen=True)
class Free:
    address: Expr
    loc: Location = _loc()


@dataclass(frozen=True)
class Open:
    predicate: str
    args: tuple[Expr, ...]
    wildcards: int = 0
    loc: Location = _loc()


@dataclass(frozen=True)
class Close:
    predicate: str
    args: tuple[Expr, ...]
    loc: Location = _loc()


@dataclass(frozen=True)
class Skip:
    loc: Location = _loc()


@dataclass(frozen=True)
class Message:
    text: str
    loc: Location = _loc()


Command = Union[Assign, Seq, If, While, Call, Malloc, Read, Write, Free, Open, Close, Skip, Message]


# Declarations
@dataclass(frozen=True)
class PredicateDef:
    name: str
    params: tuple[str, ...]
    body: Assertion
    loc: Location = _loc()


@dataclass(frozen=True)
class RoutineDef:
    name: str
    params: tuple[str, ...]
    pre: Assertion
    post: Assertion
    body: Command
    loc: Location = _loc()


@dataclass(frozen=True)
class Program:
    predicates: tuple[PredicateDef, ...] = ()
    routines: tuple[RoutineDef, ...] = ()
    main: Command = Skip()

    @cached_property
    def predicate_table(self) -> dict[str, PredicateDef]:
        table: dict[str, PredicateDef] = {}
        for definition in self.predicates:
            table.setdefault(definition.name, definition)
        return table

    @cached_property
    def routine_table(self) -> dict[str, RoutineDef]:
        table: dict[str, RoutineDef] = {}
        for definition in self.routines:
            table.setdefault(definition.name, definition)
        return table

    def predicate(self, name: str) -> Optional[PredicateDef]:
        return self.predicate_table.get(name)

    def routine(self, name: str) -> Optional[RoutineDef]:
        return self.routine_table.get(name)


def sequence(*commands: Command) -> Command:
    """Right-nested Seq of the given commands; Skip when empty."""
    if not commands:
        return Skip()
    result = commands[-1]
    for command in reversed(commands[:-1]):
        result = Seq(command, result)
    return result


# Free variables and assignment targets
def expr_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, (Add, Sub)):
        return expr_vars(e.left) | expr_vars(e.right)
    return frozenset()


def bool_vars(b: BoolExpr) -> frozenset[str]:
    if isinstance(b, Not):
        return bool_vars(b.operand)
    return expr_vars(b.left) | expr_vars(b.right)


def assertion_vars(a: Assertion) -> frozenset[str]:
    """Variables read by an assertion; pattern variables bound earlier in a conjunction are excluded."""
    if isinstance(a, BoolA):
        return bool_vars(a.condition)
    if isinstance(a, PredA):
        names: frozenset[str] = frozenset()
        for arg in a.args:
            names |= expr_vars(arg)
        return names
    if isinstance(a, SepConj):
        return assertion_vars(a.left) | (assertion_vars(a.right) - pattern_vars(a.left))
    return bool_vars(a.condition) | assertion_vars(a.then_branch) | assertion_vars(a.else_branch)


def pattern_vars(a: Assertion) -> frozenset[str]:
    if isinstance(a, PredA):
        return frozenset(a.patterns)
    if isinstance(a, SepConj):
        return pattern_vars(a.left) | pattern_vars(a.right)
    if isinstance(a, IfA):
        return pattern_vars(a.then_branch) | pattern_vars(a.else_branch)
    return frozenset()


def targets(c: Command) -> frozenset[str]:
    """Variables a command may assign."""
    if isinstance(c, (Assign, Malloc, Read)):
        return frozenset({c.target})
    if isinstance(c, Call):
        return frozenset({c.target}) if c.target is not None else frozenset()
    if isinstance(c, Seq):
        return targets(c.first) | targets(c.second)
    if isinstance(c, If):
        return targets(c.then_branch) | targets(c.else_branch)
    if isinstance(c, While):
        return targets(c.body)
    return frozenset()
