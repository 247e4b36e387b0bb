"""Depth-indexed concrete semantics and the batch runner that resolves its choices."""

from dataclasses import dataclass, field
from typing import Optional, Sequence

from app.core.constants import MALLOC_BLOCK, POINTS_TO, RESULT_VAR, ChoiceLabel, RunStatus
from app.domain.exceptions import ScriptExhausted
from app.domain.services.outcome_service import (
    bind,
    bot,
    demonic_bool,
    demonic_int,
    is_block,
    is_fail,
    map_failures,
    single,
    then,
    top,
)
from app.domain.services.printer_service import PrinterService
from app.models.choice_model import ChoiceScript
from app.models.outcome_model import Angelic, Demonic, IndexDomain, Msg, Mutator, Outcome, Single
from app.models.state_model import Chunk, CState, heap_add, heap_remove
from app.models.syntax_model import (
    Add,
    Assign,
    BoolExpr,
    Call,
    Close,
    Command,
    Eq,
    Expr,
    Free,
    If,
    IntLit,
    Lt,
    Malloc,
    Message,
    Not,
    Open,
    Program,
    Read,
    Seq,
    Skip,
    Var,
    While,
    Write,
)
from app.utils.formatting import render_concrete


def evaluate(store, e: Expr) -> int:
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, Var):
        return store.get(e.name, 0)
    if isinstance(e, Add):
        return evaluate(store, e.left) + evaluate(store, e.right)
    return evaluate(store, e.left) - evaluate(store, e.right)


def holds(store, b: BoolExpr) -> bool:
    if isinstance(b, Not):
        return not holds(store, b.operand)
    if isinstance(b, Eq):
        return evaluate(store, b.left) == evaluate(store, b.right)
    assert isinstance(b, Lt)
    return evaluate(store, b.left) < evaluate(store, b.right)


def _domain(chunk: Chunk) -> tuple:
    return (chunk.predicate, chunk.args[0]) if chunk.args else (chunk.predicate,)


def describe_request(predicate: str, fixed: Sequence, n_unfixed: int, render=str) -> str:
    shown = [render(v) for v in fixed] + ["_"] * n_unfixed
    if predicate == POINTS_TO and len(shown) == 2:
        return f"{shown[0]} |-> {shown[1]}"
    return f"{predicate}({', '.join(shown)})"


def cproduce_chunks(state: CState, chunks: Sequence[Chunk]) -> Outcome:
    """Add chunks; blocks (⊤) when a domain overlaps the heap or another new chunk."""
    taken = {_domain(c) for c in state.heap}
    for chunk in chunks:
        key = _domain(chunk)
        if key in taken:
            return top()
        taken.add(key)
    return single(state.with_heap(heap_add(state.heap, chunks)))


def cconsume_chunk(state: CState, predicate: str, fixed: Sequence[int], n_unfixed: int) -> Outcome:
    """Remove the least chunk matching the fixed arguments; answers its remaining arguments."""
    fixed = tuple(fixed)
    for index, chunk in enumerate(state.heap):
        if (
            chunk.predicate == predicate
            and len(chunk.args) == len(fixed) + n_unfixed
            and chunk.args[: len(fixed)] == fixed
        ):
            return single(state.with_heap(heap_remove(state.heap, index)), chunk.args[len(fixed) :])
    return bot(f"no chunk {describe_request(predicate, fixed, n_unfixed)} in the heap")


class ConcreteExecutor:
    """exec_n over one program; with trace on, atomic steps emit state lines."""

    def __init__(self, program: Program, trace: bool = False):
        self.program = program
        self.trace = trace

    def exec_n(self, command: Command, depth: int) -> Mutator:
        return lambda state: self._exec(command, depth, state)

    def exec(self, command: Command) -> Mutator:
        """Unbounded semantics: demonic choice over the depth."""
        return lambda state: demonic_int(
            lambda depth: self._exec(command, depth, state) if depth >= 0 else top(),
            ChoiceLabel.DEPTH.value,
        )

    def _step(self, command: Command, outcome: Outcome) -> Outcome:
        step = PrinterService.command(command)
        outcome = map_failures(outcome, lambda reason: f"{step}: {reason}")
        if not self.trace:
            return outcome
        return then(outcome, lambda s: Msg(render_concrete(step, s), single(s)))

    def _exec(self, c: Command, n: int, state: CState) -> Outcome:
        if n <= 0:
            return top()
        m = n - 1
        if isinstance(c, Seq):
            return then(self._exec(c.first, m, state), lambda s: self._exec(c.second, m, s))
        if isinstance(c, Assign):
            return self._step(c, single(state.assign(c.target, evaluate(state.store, c.value))))
        if isinstance(c, If):
            return demonic_bool(lambda flag: self._branch(c, flag, m, state))
        if isinstance(c, While):
            return self._loop(c, m, state, 0)
        if isinstance(c, Call):
            return self._call(c, m, state)
        if isinstance(c, Malloc):
            return demonic_int(
                lambda address: self._cells(c, state, address, ()) if address > 0 else top(),
                ChoiceLabel.ADDRESS.value,
            )
        if isinstance(c, Read):
            address = evaluate(state.store, c.address)
            consumed = cconsume_chunk(state, POINTS_TO, [address], 1)
            return self._step(
                c,
                bind(
                    consumed,
                    lambda s, values: then(
                        cproduce_chunks(s, [Chunk(POINTS_TO, (address, values[0]))]),
                        lambda s2: single(s2.assign(c.target, values[0])),
                    ),
                ),
            )
        if isinstance(c, Write):
            address = evaluate(state.store, c.address)
            value = evaluate(state.store, c.value)
            consumed = cconsume_chunk(state, POINTS_TO, [address], 1)
            return self._step(c, then(consumed, lambda s: cproduce_chunks(s, [Chunk(POINTS_TO, (address, value))])))
        if isinstance(c, Free):
            address = evaluate(state.store, c.address)
            block = cconsume_chunk(state, MALLOC_BLOCK, [address], 1)
            return self._step(c, bind(block, lambda s, size: self._free_cells(s, address, 0, size[0])))
        if isinstance(c, Message):
            return Msg(c.text, single(state))
        if isinstance(c, (Open, Close, Skip)):
            return single(state)
        raise TypeError(f"not a command: {c!r}")

    def _branch(self, c: If, flag: bool, m: int, state: CState) -> Outcome:
        if holds(state.store, c.condition) != flag:
            return top()
        return self._exec(c.then_branch if flag else c.else_branch, m, state)

    def _loop(self, c: While, m: int, state: CState, iteration: int) -> Outcome:
        """(assume b; exec_m body)^k; assume ¬b with k at most m."""

        def choose(again: bool) -> Outcome:
            guard = holds(state.store, c.condition)
            if not again:
                return single(state) if not guard else top()
            if not guard or iteration >= m:
                return top()
            return then(self._exec(c.body, m, state), lambda s: self._loop(c, m, s, iteration + 1))

        return demonic_bool(choose)

    def _call(self, c: Call, m: int, state: CState) -> Outcome:
        routine = self.program.routine(c.routine)
        values = [evaluate(state.store, a) for a in c.args]
        callee = state.with_store(dict(zip(routine.params, values)))

        def back(s: CState) -> Outcome:
            returned = state.with_heap(s.heap)
            if c.target is not None:
                returned = returned.assign(c.target, s.lookup(RESULT_VAR))
            if self.trace:
                return Msg(render_concrete(PrinterService.command(c), returned), single(returned))
            return single(returned)

        return then(self._exec(routine.body, m, callee), back)

    def _cells(self, c: Malloc, state: CState, address: int, values: tuple[int, ...]) -> Outcome:
        if len(values) < c.size:
            return demonic_int(
                lambda v: self._cells(c, state, address, values + (v,)),
                ChoiceLabel.VALUE.value,
            )
        chunks = [Chunk(MALLOC_BLOCK, (address, c.size))]
        chunks += [Chunk(POINTS_TO, (address + i, v)) for i, v in enumerate(values)]
        return self._step(c, then(cproduce_chunks(state, chunks), lambda s: single(s.assign(c.target, address))))

    def _free_cells(self, state: CState, address: int, offset: int, size: int) -> Outcome:
        if offset >= size:
            return single(state)
        consumed = cconsume_chunk(state, POINTS_TO, [address + offset], 1)
        return then(consumed, lambda s: self._free_cells(s, address, offset + 1, size))


def exec_n(program: Program, command: Command, depth: int) -> Mutator:
    return ConcreteExecutor(program).exec_n(command, depth)


@dataclass
class ExecutionReport:
    status: RunStatus
    state: Optional[CState] = None
    trace: list[str] = field(default_factory=list)
    reason: Optional[str] = None
    choices: list[int] = field(default_factory=list)


def walk(outcome: Outcome, script: ChoiceScript) -> ExecutionReport:
    """Follow one path: integer choices from the script, boolean ones towards the live branch."""
    lines: list[str] = []
    node = outcome
    while True:
        if isinstance(node, Msg):
            lines.append(node.text)
            node = node.rest
        elif isinstance(node, Single):
            return ExecutionReport(RunStatus.OK, node.state, lines, None, list(script.consumed))
        elif node.index is IndexDomain.EMPTY:
            if isinstance(node, Demonic):
                return ExecutionReport(RunStatus.BLOCKED, None, lines, "execution blocked", list(script.consumed))
            return ExecutionReport(RunStatus.FAILED, None, lines, node.reason or "failure", list(script.consumed))
        elif node.index is IndexDomain.BOOL:
            node = _pick(node, script)
        else:
            try:
                node = node.branch(script.next(node.label))
            except ScriptExhausted as exc:
                return ExecutionReport(
                    RunStatus.SCRIPT_EXHAUSTED, None, lines, exc.message, list(script.consumed)
                )


def _pick(node: Demonic | Angelic, script: ChoiceScript) -> Outcome:
    if isinstance(node, Angelic):
        first = node.branch(True)
        return node.branch(False) if is_fail(first) else first
    otherwise = node.branch(False)
    if is_block(otherwise):
        return node.branch(True)
    chosen = node.branch(True)
    if is_block(chosen):
        return otherwise
    return chosen if script.next_bool() else otherwise


def run_from(
    program: Program,
    command: Command,
    state: CState,
    depth: int,
    script: ChoiceScript,
    trace: bool = False,
) -> ExecutionReport:
    outcome = ConcreteExecutor(program, trace).exec_n(command, depth)(state)
    return walk(outcome, script)


def run(program: Program, depth: int, script: ChoiceScript, trace: bool = False) -> ExecutionReport:
    """Run main from the empty state."""
    return run_from(program, program.main, CState(), depth, script, trace)
