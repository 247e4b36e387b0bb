"""Symbolic terms, formulae and the linear normal form used by the prover."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Union


@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class Sym:
    """A symbolic unknown; the hint only affects display."""

    id: int
    hint: str = field(default="", compare=False)


@dataclass(frozen=True)
class TermAdd:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class TermSub:
    left: "Term"
    right: "Term"


Term = Union[Lit, Sym, TermAdd, TermSub]


@dataclass(frozen=True)
class EqF:
    left: Term
    right: Term


@dataclass(frozen=True)
class LtF:
    left: Term
    right: Term


@dataclass(frozen=True)
class NotF:
    operand: "Formula"


Formula = Union[EqF, LtF, NotF]


def declared(symbol: Sym) -> EqF:
    """The housekeeping fact ς = ς that records a symbol as used."""
    return EqF(symbol, symbol)


def term_symbols(t: Term) -> frozenset[Sym]:
    if isinstance(t, Sym):
        return frozenset({t})
    if isinstance(t, (TermAdd, TermSub)):
        return term_symbols(t.left) | term_symbols(t.right)
    return frozenset()


def formula_symbols(f: Formula) -> frozenset[Sym]:
    if isinstance(f, NotF):
        return formula_symbols(f.operand)
    return term_symbols(f.left) | term_symbols(f.right)


def term_key(t: Term) -> tuple:
    """Total order on terms: literals, then symbols by id, then compound terms."""
    if isinstance(t, Lit):
        return (0, t.value)
    if isinstance(t, Sym):
        return (1, t.id)
    if isinstance(t, TermAdd):
        return (2, term_key(t.left), term_key(t.right))
    return (3, term_key(t.left), term_key(t.right))


def evaluate_term(t: Term, model: Mapping[int, int]) -> int:
    if isinstance(t, Lit):
        return t.value
    if isinstance(t, Sym):
        return model[t.id]
    if isinstance(t, TermAdd):
        return evaluate_term(t.left, model) + evaluate_term(t.right, model)
    return evaluate_term(t.left, model) - evaluate_term(t.right, model)


def evaluate_formula(f: Formula, model: Mapping[int, int]) -> bool:
    if isinstance(f, NotF):
        return not evaluate_formula(f.operand, model)
    left = evaluate_term(f.left, model)
    right = evaluate_term(f.right, model)
    return left == right if isinstance(f, EqF) else left < right


@dataclass(frozen=True)
class LinearForm:
    """constant + Σ coefficient·symbol, with symbols identified by id and no zero coefficients."""

    constant: int = 0
    coefficients: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, constant: int, coefficients: Mapping[int, int] | Iterable[tuple[int, int]]) -> "LinearForm":
        items = coefficients.items() if isinstance(coefficients, Mapping) else coefficients
        merged: dict[int, int] = {}
        for symbol, coefficient in items:
            merged[symbol] = merged.get(symbol, 0) + coefficient
        return cls(constant, tuple(sorted((s, c) for s, c in merged.items() if c != 0)))

    @property
    def symbols(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.coefficients)

    def is_constant(self) -> bool:
        return not self.coefficients

    def coefficient(self, symbol: int) -> int:
        for s, c in self.coefficients:
            if s == symbol:
                return c
        return 0

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm.of(self.constant + other.constant, self.coefficients + other.coefficients)

    def __neg__(self) -> "LinearForm":
        return self.scale(-1)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def shift(self, amount: int) -> "LinearForm":
        return LinearForm(self.constant + amount, self.coefficients)

    def scale(self, factor: int) -> "LinearForm":
        if factor == 0:
            return LinearForm()
        return LinearForm(self.constant * factor, tuple((s, c * factor) for s, c in self.coefficients))

    def without(self, symbol: int) -> "LinearForm":
        return LinearForm(self.constant, tuple((s, c) for s, c in self.coefficients if s != symbol))

    def substitute(self, symbol: int, replacement: "LinearForm") -> "LinearForm":
        c = self.coefficient(symbol)
        if c == 0:
            return self
        return self.without(symbol) + replacement.scale(c)

    def content(self) -> int:
        """gcd of the coefficients (0 for a constant form)."""
        g = 0
        for _, c in self.coefficients:
            g = gcd(g, c)
        return g

    def evaluate(self, model: Mapping[int, int]) -> int:
        return self.constant + sum(c * model[s] for s, c in self.coefficients)
