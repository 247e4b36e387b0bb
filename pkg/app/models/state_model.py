"""Heap chunks and the three kinds of execution state."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field, replace
from typing import Any, Generic, Iterable, Mapping, TypeVar

from app.models.term_model import EqF, Formula, Lit, Sym, Term, formula_symbols, term_key, term_symbols


V = TypeVar("V")


@dataclass(frozen=True)
class Chunk(Generic[V]):
    """A predicate applied to values: integers in concrete heaps, terms in symbolic ones."""

    predicate: str
    args: tuple[V, ...]

    def sort_key(self) -> tuple:
        return (self.predicate, tuple(_value_key(a) for a in self.args))


def _value_key(value: Any) -> tuple:
    if isinstance(value, int):
        return (0, value)
    return term_key(value)


Heap = tuple[Chunk, ...]


def heap_add(heap: Heap, chunks: Iterable[Chunk]) -> Heap:
    """Multiset union; the result stays in canonical order."""
    items = list(heap)
    keys = [c.sort_key() for c in items]
    for chunk in chunks:
        key = chunk.sort_key()
        index = bisect.bisect_right(keys, key)
        keys.insert(index, key)
        items.insert(index, chunk)
    return tuple(items)


def heap_remove(heap: Heap, index: int) -> Heap:
    return heap[:index] + heap[index + 1 :]


def make_heap(chunks: Iterable[Chunk]) -> Heap:
    return heap_add((), chunks)


@dataclass(frozen=True)
class CState:
    """Concrete state: total store (absent means 0) and a disjoint heap."""

    store: Mapping[str, int] = field(default_factory=dict)
    heap: Heap = ()

    def lookup(self, name: str) -> int:
        return self.store.get(name, 0)

    def assign(self, name: str, value: int):
        return replace(self, store={**self.store, name: value})

    def with_store(self, store: Mapping[str, int]):
        return replace(self, store=dict(store))

    def with_heap(self, heap: Heap):
        return replace(self, heap=heap)


@dataclass(frozen=True)
class SCState(CState):
    """Semiconcrete state: like the concrete one, but the heap may hold overlapping chunks."""


@dataclass(frozen=True)
class SState:
    """Symbolic state: path condition, symbolic store and heap of symbolic chunks."""

    pc: tuple[Formula, ...] = ()
    store: Mapping[str, Term] = field(default_factory=dict)
    heap: Heap = ()

    def lookup(self, name: str) -> Term:
        return self.store.get(name, Lit(0))

    def assign(self, name: str, value: Term) -> "SState":
        return replace(self, store={**self.store, name: value})

    def with_store(self, store: Mapping[str, Term]) -> "SState":
        return replace(self, store=dict(store))

    def with_heap(self, heap: Heap) -> "SState":
        return replace(self, heap=heap)

    def with_fact(self, fact: Formula) -> "SState":
        if fact in self.pc:
            return self
        return replace(self, pc=self.pc + (fact,))

    def used(self) -> tuple[Sym, ...]:
        """Symbols declared in the path condition, ordered by id."""
        found = {f.left for f in self.pc if isinstance(f, EqF) and isinstance(f.left, Sym) and f.left == f.right}
        return tuple(sorted(found, key=lambda s: s.id))

    def mentioned(self) -> frozenset[Sym]:
        symbols: frozenset[Sym] = frozenset()
        for fact in self.pc:
            symbols |= formula_symbols(fact)
        for value in self.store.values():
            symbols |= term_symbols(value)
        for chunk in self.heap:
            for arg in chunk.args:
                symbols |= term_symbols(arg)
        return symbols
