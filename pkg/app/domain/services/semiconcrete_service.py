"""Semiconcrete execution: concrete values, contracts honoured, overlapping chunks allowed."""

from typing import Optional, Sequence

from app.domain.interfaces.contract_executor import ContractExecutor
from app.domain.services.concrete_service import describe_request, evaluate, holds
from app.domain.services.outcome_service import (
    bot,
    counterexample,
    demonic_int,
    resolve,
    satisfies,
    single,
    top,
)
from app.domain.services.printer_service import PrinterService
from app.models.choice_model import ChoiceScript
from app.models.outcome_model import Outcome
from app.models.state_model import SCState, heap_remove
from app.models.syntax_model import Assertion, BoolExpr, Command, Expr, Program
from app.utils.formatting import render_concrete


class SemiconcreteExecutor(ContractExecutor[SCState, int]):
    """Unknown values are integer demonic choices, resolved later by a value-source script."""

    def initial_state(self) -> SCState:
        return SCState()

    def value(self, state: SCState, e: Expr) -> int:
        return evaluate(state.store, e)

    def offset(self, base: int, amount: int) -> int:
        return base + amount

    def assume(self, state: SCState, condition: BoolExpr) -> Outcome:
        return single(state) if holds(state.store, condition) else top()

    def assert_(self, state: SCState, condition: BoolExpr) -> Outcome:
        if holds(state.store, condition):
            return single(state)
        return bot(f"{PrinterService.bool_expr(condition)} does not hold")

    def choose(self, state: SCState, hint: str, label: str) -> Outcome:
        return demonic_int(lambda v: single(state, v), label)

    def assume_address(self, state: SCState, address: int) -> Outcome:
        return single(state) if address > 0 else top()

    def consume_chunk(self, state: SCState, predicate: str, fixed: Sequence[int], n_unfixed: int) -> Outcome:
        fixed = tuple(fixed)
        for index, chunk in enumerate(state.heap):
            if (
                chunk.predicate == predicate
                and len(chunk.args) == len(fixed) + n_unfixed
                and chunk.args[: len(fixed)] == fixed
            ):
                return single(state.with_heap(heap_remove(state.heap, index)), chunk.args[len(fixed) :])
        return bot(f"no chunk {describe_request(predicate, fixed, n_unfixed)} in the heap")

    def size_of(self, state: SCState, size: int) -> Optional[int]:
        return size

    def render(self, step: str, state: SCState) -> str:
        return render_concrete(step, state)

    def render_value(self, state: SCState, value: int) -> str:
        return str(value)


def produce(program: Program, a: Assertion, state: SCState) -> Outcome:
    return SemiconcreteExecutor(program, trace=False).produce(a, state)


def consume(program: Program, a: Assertion, state: SCState) -> Outcome:
    return SemiconcreteExecutor(program, trace=False).consume(a, state)


def scexec(program: Program, c: Command, state: SCState) -> Outcome:
    return SemiconcreteExecutor(program, trace=False).exec(c, state)


def leakcheck(state: SCState) -> Outcome:
    return SemiconcreteExecutor(Program(), trace=False).leakcheck(state)


def value_source(values: Sequence[int], seed: int = 0) -> ChoiceScript:
    """Scripted values first, then seeded random ones."""
    return ChoiceScript.seeded(seed, list(values))


def resolved_routine(program: Program, name: str, values: Sequence[int] = (), seed: int = 0) -> Outcome:
    executor = SemiconcreteExecutor(program)
    return resolve(executor.valid_routine(program.routine(name)), value_source(values, seed))


def valid_routine(program: Program, name: str, values: Sequence[int] = (), seed: int = 0) -> bool:
    """Semiconcrete validity of one routine for the given value-source."""
    return satisfies(resolved_routine(program, name, values, seed), lambda s, a: True)


def routine_failure(program: Program, name: str, values: Sequence[int] = (), seed: int = 0) -> Optional[list[str]]:
    return counterexample(resolved_routine(program, name, values, seed), lambda s, a: True)


def sc_safe_program(program: Program, seed: int = 0) -> bool:
    """Every routine valid and main free of failures, for seeded value-sources."""
    for routine in program.routines:
        if not valid_routine(program, routine.name, seed=seed):
            return False
    main = resolve(SemiconcreteExecutor(program).valid_main(), value_source((), seed))
    return satisfies(main, lambda s, a: True)


__all__ = [
    "SemiconcreteExecutor",
    "consume",
    "leakcheck",
    "produce",
    "routine_failure",
    "sc_safe_program",
    "scexec",
    "valid_routine",
    "value_source",
]
