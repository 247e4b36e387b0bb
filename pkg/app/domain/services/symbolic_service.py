"""Symbolic execution: terms for values, a path condition, and the prover for every decision."""

from dataclasses import replace
from typing import Optional, Sequence

from app.core.config import settings
from app.domain.exceptions import StateInvariantViolation
from app.domain.interfaces.contract_executor import ContractExecutor
from app.domain.services.concrete_service import describe_request
from app.domain.services.outcome_service import bot, counterexample, satisfies, single, top
from app.domain.services.prover_service import Prover, normalize
from app.models.outcome_model import Outcome
from app.models.state_model import SState, heap_remove
from app.models.syntax_model import (
    Add,
    BoolExpr,
    Command,
    Eq,
    Expr,
    IntLit,
    Lt,
    Not,
    Program,
    Var,
)
from app.models.term_model import EqF, Formula, Lit, LtF, NotF, Sym, Term, TermAdd, TermSub, declared
from app.utils.formatting import render_formula, render_symbolic, render_term, symbol_names


def seval(state: SState, e: Expr) -> Term:
    if isinstance(e, IntLit):
        return Lit(e.value)
    if isinstance(e, Var):
        return state.lookup(e.name)
    if isinstance(e, Add):
        return TermAdd(seval(state, e.left), seval(state, e.right))
    return TermSub(seval(state, e.left), seval(state, e.right))


def sformula(state: SState, b: BoolExpr) -> Formula:
    if isinstance(b, Not):
        return NotF(sformula(state, b.operand))
    if isinstance(b, Eq):
        return EqF(seval(state, b.left), seval(state, b.right))
    assert isinstance(b, Lt)
    return LtF(seval(state, b.left), seval(state, b.right))


def fresh(state: SState, hint: str = "") -> tuple[SState, Sym]:
    """The least unused symbol, declared in the path condition."""
    taken = {s.id for s in state.used()}
    ident = 0
    while ident in taken:
        ident += 1
    symbol = Sym(ident, hint)
    return state.with_fact(declared(symbol)), symbol


class SymbolicExecutor(ContractExecutor[SState, Term]):
    """Unknown values are fresh symbols; every branch decision goes through the prover."""

    def __init__(
        self,
        program: Program,
        prover: Optional[Prover] = None,
        trace: bool = True,
        check_invariants: Optional[bool] = None,
    ):
        super().__init__(program, trace)
        self.prover = prover or Prover()
        if check_invariants is None:
            check_invariants = settings.execution.check_state_invariants
        self.check_invariants = check_invariants

    def initial_state(self) -> SState:
        return SState()

    def value(self, state: SState, e: Expr) -> Term:
        return seval(state, e)

    def offset(self, base: Term, amount: int) -> Term:
        if amount == 0:
            return base
        return TermAdd(base, Lit(amount))

    def sassume(self, state: SState, fact: Formula) -> Outcome:
        if self.prover.entails(state.pc, NotF(fact)):
            return top()
        return single(state.with_fact(fact))

    def sassert(self, state: SState, fact: Formula) -> Outcome:
        if self.prover.entails(state.pc, fact):
            return single(state)
        return bot(f"cannot prove {render_formula(fact, symbol_names(state.used()))}")

    def assume(self, state: SState, condition: BoolExpr) -> Outcome:
        return self.sassume(state, sformula(state, condition))

    def assert_(self, state: SState, condition: BoolExpr) -> Outcome:
        return self.sassert(state, sformula(state, condition))

    def choose(self, state: SState, hint: str, label: str) -> Outcome:
        extended, symbol = fresh(state, hint)
        return single(extended, symbol)

    def assume_address(self, state: SState, address: Term) -> Outcome:
        return self.sassume(state, LtF(Lit(0), address))

    def provably_equal(self, state: SState, left: Term, right: Term) -> bool:
        if left == right or normalize(left) == normalize(right):
            return True
        return self.prover.entails(state.pc, EqF(left, right))

    def consume_chunk(self, state: SState, predicate: str, fixed: Sequence[Term], n_unfixed: int) -> Outcome:
        fixed = tuple(fixed)
        for index, chunk in enumerate(state.heap):
            if chunk.predicate != predicate or len(chunk.args) != len(fixed) + n_unfixed:
                continue
            if all(self.provably_equal(state, a, f) for a, f in zip(chunk.args, fixed)):
                return single(state.with_heap(heap_remove(state.heap, index)), chunk.args[len(fixed) :])
        names = symbol_names(state.used())
        request = describe_request(predicate, fixed, n_unfixed, lambda t: render_term(t, names))
        return bot(f"no chunk {request} in the heap")

    def size_of(self, state: SState, size: Term) -> Optional[int]:
        form = normalize(size)
        return form.constant if form.is_constant() else None

    def render(self, step: str, state: SState) -> str:
        return render_symbolic(step, state)

    def render_value(self, state: SState, value: Term) -> str:
        return render_term(value, symbol_names(state.used()))

    def checked(self, state: SState, where: str) -> SState:
        if self.check_invariants:
            undeclared = state.mentioned() - set(state.used())
            if undeclared:
                raise StateInvariantViolation(where, [f"s{s.id}" for s in undeclared])
        return state


def sexec(program: Program, c: Command, state: SState, prover: Optional[Prover] = None) -> Outcome:
    return SymbolicExecutor(program, prover, trace=False).exec(c, state)


def svalid_outcome(program: Program, name: str, prover: Optional[Prover] = None, trace: bool = True) -> Outcome:
    return SymbolicExecutor(program, prover, trace).valid_routine(program.routine(name))


def svalid_routine(program: Program, name: str, prover: Optional[Prover] = None) -> bool:
    return satisfies(svalid_outcome(program, name, prover, trace=False), lambda s, a: True)


def smain_outcome(program: Program, prover: Optional[Prover] = None, trace: bool = True) -> Outcome:
    return SymbolicExecutor(program, prover, trace).valid_main()


def svalid_program(program: Program, prover: Optional[Prover] = None) -> bool:
    """Every routine meets its contract and main never fails."""
    prover = prover or Prover()
    if not all(svalid_routine(program, r.name, prover) for r in program.routines):
        return False
    return satisfies(smain_outcome(program, prover, trace=False), lambda s, a: True)


def failing_path(outcome: Outcome) -> Optional[list[str]]:
    return counterexample(outcome, lambda s, a: True)


def initial_with(store: dict[str, int]) -> SState:
    """A state whose store maps the given variables to literals."""
    return replace(SState(), store={k: Lit(v) for k, v in store.items()})
