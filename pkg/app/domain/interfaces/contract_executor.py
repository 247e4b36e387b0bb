"""Template for executors that honour contracts: produce, consume, loops, calls, validity."""

from abc import ABC, abstractmethod
from typing import Any, Callable, Generic, Optional, Sequence, TypeVar

from app.core.constants import MALLOC_BLOCK, POINTS_TO, RESULT_VAR, ChoiceLabel
from app.domain.services.outcome_service import (
    bind,
    bot,
    demonic_bool,
    map_failures,
    single,
    then,
    top,
)
from app.domain.services.printer_service import PrinterService
from app.models.outcome_model import Msg, Outcome
from app.models.state_model import Chunk, heap_add
from app.models.syntax_model import (
    Assertion,
    Assign,
    BoolA,
    BoolExpr,
    Call,
    Close,
    Command,
    Expr,
    Free,
    If,
    IfA,
    IntLit,
    Malloc,
    Message,
    Not,
    Open,
    PredA,
    Program,
    Read,
    RoutineDef,
    SepConj,
    Seq,
    Skip,
    While,
    Write,
    assertion_vars,
    targets,
)


S = TypeVar("S")
V = TypeVar("V")


class ContractExecutor(ABC, Generic[S, V]):
    """
    Shared semantics of the semiconcrete and symbolic executors.

    Subclasses decide what a value is (an integer or a term), how guards are
    assumed and asserted, where unknown values come from and how a chunk is
    matched. Everything else, including the trace lines, lives here.
    """

    def __init__(self, program: Program, trace: bool = True):
        self.program = program
        self.trace = trace

    # Hooks
    @abstractmethod
    def initial_state(self) -> S:
        """Empty store, empty heap."""

    @abstractmethod
    def value(self, state: S, e: Expr) -> V:
        """Evaluate an expression in the state's store."""

    @abstractmethod
    def offset(self, base: V, amount: int) -> V:
        """Address arithmetic for block cells."""

    @abstractmethod
    def assume(self, state: S, condition: BoolExpr) -> Outcome:
        """Continue under the condition, or block (⊤) when it cannot hold."""

    @abstractmethod
    def assert_(self, state: S, condition: BoolExpr) -> Outcome:
        """Continue when the condition holds, otherwise fail (⊥)."""

    @abstractmethod
    def choose(self, state: S, hint: str, label: str) -> Outcome:
        """Answer an arbitrary value, demonically."""

    @abstractmethod
    def assume_address(self, state: S, address: V) -> Outcome:
        """Restrict a fresh block address to positive values."""

    @abstractmethod
    def consume_chunk(self, state: S, predicate: str, fixed: Sequence[V], n_unfixed: int) -> Outcome:
        """Remove one matching chunk, answering its unfixed arguments; ⊥ if none matches."""

    @abstractmethod
    def size_of(self, state: S, size: V) -> Optional[int]:
        """The block size as an integer, or None when it is not known."""

    @abstractmethod
    def render(self, step: str, state: S) -> str:
        """One trace line."""

    @abstractmethod
    def render_value(self, state: S, value: V) -> str:
        """A value as it appears in failure reasons."""

    def checked(self, state: S, where: str) -> S:
        """Hook run after every traced step."""
        return state

    # Helpers
    def note(self, step: str, state: S) -> Outcome:
        state = self.checked(state, step)
        if not self.trace:
            return single(state)
        return Msg(self.render(step, state), single(state))

    def with_store(self, state: S, store: dict, inner: Callable[[S], Outcome]) -> Outcome:
        """Run inner under store, then put the caller's store back; answers pass through."""
        saved = state.store
        return bind(inner(state.with_store(store)), lambda s, answer: single(s.with_store(saved), answer))

    def add_chunks(self, state: S, chunks: Sequence[Chunk]) -> S:
        return state.with_heap(heap_add(state.heap, chunks))

    def choose_all(self, state: S, hints: Sequence[str], label: str, chosen: tuple = ()) -> Outcome:
        """Choose len(hints) values in order; answers the tuple."""
        if len(chosen) == len(hints):
            return single(state, chosen)
        return bind(
            self.choose(state, hints[len(chosen)], label),
            lambda s, v: self.choose_all(s, hints, label, chosen + (v,)),
        )

    def leakcheck(self, state: S) -> Outcome:
        if not state.heap:
            return Msg(self.render("leak check", state), top()) if self.trace else top()
        leaked = ", ".join(self._render_chunk(state, c) for c in state.heap)
        return bot(f"leak check: heap still holds {leaked}")

    def _render_chunk(self, state: S, chunk: Chunk) -> str:
        args = [self.render_value(state, a) for a in chunk.args]
        if chunk.predicate == POINTS_TO and len(args) == 2:
            return f"{args[0]} |-> {args[1]}"
        return f"{chunk.predicate}({', '.join(args)})"

    # Assertions
    def produce(self, a: Assertion, state: S) -> Outcome:
        if isinstance(a, BoolA):
            return self.assume(state, a.condition)
        if isinstance(a, PredA):
            fixed = tuple(self.value(state, e) for e in a.args)
            chosen = self.choose_all(state, a.patterns, ChoiceLabel.PATTERN.value)

            def bound(s: S, values: tuple) -> Outcome:
                for name, v in zip(a.patterns, values):
                    s = s.assign(name, v)
                return single(self.add_chunks(s, [Chunk(a.predicate, fixed + values)]))

            return bind(chosen, bound)
        if isinstance(a, SepConj):
            return then(self.produce(a.left, state), lambda s: self.produce(a.right, s))
        assert isinstance(a, IfA)
        return demonic_bool(
            lambda flag: then(
                self.assume(state, a.condition if flag else Not(a.condition)),
                lambda s: self.produce(a.then_branch if flag else a.else_branch, s),
            )
        )

    def consume(self, a: Assertion, state: S) -> Outcome:
        if isinstance(a, BoolA):
            return self.assert_(state, a.condition)
        if isinstance(a, PredA):
            fixed = tuple(self.value(state, e) for e in a.args)

            def bound(s: S, values: tuple) -> Outcome:
                for name, v in zip(a.patterns, values):
                    s = s.assign(name, v)
                return single(s)

            return bind(self.consume_chunk(state, a.predicate, fixed, len(a.patterns)), bound)
        if isinstance(a, SepConj):
            return then(self.consume(a.left, state), lambda s: self.consume(a.right, s))
        assert isinstance(a, IfA)
        return demonic_bool(
            lambda flag: then(
                self.assume(state, a.condition if flag else Not(a.condition)),
                lambda s: self.consume(a.then_branch if flag else a.else_branch, s),
            )
        )

    # Commands
    def exec(self, c: Command, state: S) -> Outcome:
        if isinstance(c, Seq):
            return then(self.exec(c.first, state), lambda s: self.exec(c.second, s))
        step = PrinterService.header(c)
        if isinstance(c, Assign):
            return self.note(step, state.assign(c.target, self.value(state, c.value)))
        if isinstance(c, If):
            return demonic_bool(lambda flag: self._branch(c, flag, state))
        if isinstance(c, While):
            return self._loop(c, state)
        if isinstance(c, Call):
            return self._call(c, state)
        if isinstance(c, Message):
            return Msg(c.text, single(state))
        if isinstance(c, Skip):
            return single(state)
        outcome = self._heap_command(c, state)
        return then(map_failures(outcome, lambda reason: f"{step}: {reason}"), lambda s: self.note(step, s))

    def _heap_command(self, c: Command, state: S) -> Outcome:
        if isinstance(c, Malloc):
            return bind(
                self.choose(state, c.target, ChoiceLabel.ADDRESS.value),
                lambda s, address: then(
                    self.assume_address(s, address),
                    lambda s2: bind(
                        self.choose_all(s2, ("v",) * c.size, ChoiceLabel.VALUE.value),
                        lambda s3, values: single(
                            self.add_chunks(
                                s3,
                                [Chunk(MALLOC_BLOCK, (address, self.value(s3, IntLit(c.size))))]
                                + [Chunk(POINTS_TO, (self.offset(address, i), v)) for i, v in enumerate(values)],
                            ).assign(c.target, address)
                        ),
                    ),
                ),
            )
        if isinstance(c, Read):
            address = self.value(state, c.address)
            return bind(
                self.consume_chunk(state, POINTS_TO, (address,), 1),
                lambda s, values: single(
                    self.add_chunks(s, [Chunk(POINTS_TO, (address, values[0]))]).assign(c.target, values[0])
                ),
            )
        if isinstance(c, Write):
            address = self.value(state, c.address)
            v = self.value(state, c.value)
            return then(
                self.consume_chunk(state, POINTS_TO, (address,), 1),
                lambda s: single(self.add_chunks(s, [Chunk(POINTS_TO, (address, v))])),
            )
        if isinstance(c, Free):
            address = self.value(state, c.address)

            def cells(s: S, answer: tuple) -> Outcome:
                size = self.size_of(s, answer[0])
                if size is None:
                    return bot(f"cannot free a block whose size {self.render_value(s, answer[0])} is not a literal")
                return self._free_cells(s, address, 0, size)

            return bind(self.consume_chunk(state, MALLOC_BLOCK, (address,), 1), cells)
        if isinstance(c, Open):
            return self._open(c, state)
        if isinstance(c, Close):
            return self._close(c, state)
        raise TypeError(f"not a command: {c!r}")

    def _free_cells(self, state: S, address: V, index: int, size: int) -> Outcome:
        if index >= size:
            return single(state)
        return then(
            self.consume_chunk(state, POINTS_TO, (self.offset(address, index),), 1),
            lambda s: self._free_cells(s, address, index + 1, size),
        )

    def _open(self, c: Open, state: S) -> Outcome:
        definition = self.program.predicate(c.predicate)
        fixed = tuple(self.value(state, e) for e in c.args)
        return bind(
            self.consume_chunk(state, c.predicate, fixed, c.wildcards),
            lambda s, rest: self.with_store(
                s, dict(zip(definition.params, fixed + tuple(rest))), lambda s2: self.produce(definition.body, s2)
            ),
        )

    def _close(self, c: Close, state: S) -> Outcome:
        definition = self.program.predicate(c.predicate)
        values = tuple(self.value(state, e) for e in c.args)
        return then(
            self.with_store(state, dict(zip(definition.params, values)), lambda s: self.consume(definition.body, s)),
            lambda s: single(self.add_chunks(s, [Chunk(c.predicate, values)])),
        )

    def _branch(self, c: If, flag: bool, state: S) -> Outcome:
        condition = c.condition if flag else Not(c.condition)
        return then(
            then(self.assume(state, condition), lambda s: self.note(f"assume {PrinterService.bool_expr(condition)}", s)),
            lambda s: self.exec(c.then_branch if flag else c.else_branch, s),
        )

    def _loop(self, c: While, state: S) -> Outcome:
        invariant = c.invariant
        label = f"while {PrinterService.bool_expr(c.condition)}"
        entry = map_failures(
            self.with_store(state, state.store, lambda s: self.consume(invariant, s)),
            lambda reason: f"{label}: invariant on entry: {reason}",
        )
        havocked = sorted(targets(c.body))

        def split(s: S) -> Outcome:
            return demonic_bool(lambda flag: self._iteration(c, s, label) if flag else self._exit(c, s, label))

        return then(entry, lambda s: bind(self.choose_all(s, havocked, ChoiceLabel.HAVOC.value), _assign_all(havocked, split)))

    def _iteration(self, c: While, state: S, label: str) -> Outcome:
        invariant = c.invariant
        cleared = state.with_heap(())
        produced = self.with_store(cleared, cleared.store, lambda s: self.produce(invariant, s))
        guarded = then(produced, lambda s: self.assume(s, c.condition))
        entered = then(guarded, lambda s: self.note(f"{label}: iteration", s))
        body = then(entered, lambda s: self.exec(c.body, s))
        restored = then(
            body,
            lambda s: map_failures(
                self.with_store(s, s.store, lambda s2: self.consume(invariant, s2)),
                lambda reason: f"{label}: invariant after body: {reason}",
            ),
        )
        return then(
            restored,
            lambda s: map_failures(self.leakcheck(s), lambda reason: f"{label}: {reason}"),
        )

    def _exit(self, c: While, state: S, label: str) -> Outcome:
        produced = self.with_store(state, state.store, lambda s: self.produce(c.invariant, s))
        exited = then(produced, lambda s: self.assume(s, Not(c.condition)))
        return then(exited, lambda s: self.note(f"{label}: exit", s))

    def _call(self, c: Call, state: S) -> Outcome:
        routine = self.program.routine(c.routine)
        arguments = [self.value(state, e) for e in c.args]
        needs_result = c.target is not None or RESULT_VAR in assertion_vars(routine.post)
        step = PrinterService.command(c)

        def contract(s: S) -> Outcome:
            pre = map_failures(
                self.consume(routine.pre, s),
                lambda reason: f"{step}: precondition of {routine.name}: {reason}",
            )

            def post(s1: S) -> Outcome:
                if needs_result:
                    bound = bind(
                        self.choose(s1, RESULT_VAR, ChoiceLabel.RESULT.value),
                        lambda s2, v: single(s2.assign(RESULT_VAR, v)),
                    )
                else:
                    bound = single(s1)
                produced = then(bound, lambda s2: self.produce(routine.post, s2))
                return bind(produced, lambda s3, _: single(s3, s3.lookup(RESULT_VAR)))

            return then(pre, post)

        called = self.with_store(state, dict(zip(routine.params, arguments)), contract)

        def returned(s: S, v: Any) -> Outcome:
            if c.target is not None:
                s = s.assign(c.target, v)
            return self.note(step, s)

        return bind(called, returned)

    # Validity
    def valid_routine(self, routine: RoutineDef) -> Outcome:
        """Outcome of checking one routine against its contract from the empty state."""
        header = f"routine {routine.name}({', '.join(routine.params)})"

        def entered(s: S, values: tuple) -> Outcome:
            s1 = self.checked(s.with_store(dict(zip(routine.params, values))), header)
            rest = then(
                self.produce(routine.pre, s1),
                lambda s2: then(self.note("produce precondition", s2), lambda s3: self._run_body(routine, s3)),
            )
            return Msg(self.render(header, s1), rest) if self.trace else rest

        return bind(self.choose_all(self.initial_state(), routine.params, ChoiceLabel.PARAM.value), entered)

    def _run_body(self, routine: RoutineDef, state: S) -> Outcome:
        saved = dict(state.store)

        def finish(s: S) -> Outcome:
            post_store = {**saved, RESULT_VAR: s.lookup(RESULT_VAR)}
            consumed = map_failures(
                self.with_store(s, post_store, lambda s2: self.consume(routine.post, s2)),
                lambda reason: f"postcondition of {routine.name}: {reason}",
            )
            noted = then(consumed, lambda s2: self.note("consume postcondition", s2))
            return then(noted, lambda s2: map_failures(self.leakcheck(s2), lambda reason: f"{routine.name}: {reason}"))

        return then(self.exec(routine.body, state), finish)

    def valid_main(self) -> Outcome:
        """Main runs from the empty state; it is not leak-checked."""
        return self.exec(self.program.main, self.initial_state())


def _assign_all(names: Sequence[str], k: Callable[[Any], Outcome]) -> Callable[[Any, tuple], Outcome]:
    def assign(state, values: tuple) -> Outcome:
        for name, v in zip(names, values):
            state = state.assign(name, v)
        return k(state)

    return assign
