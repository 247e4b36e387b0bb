"""Entailment over linear integer arithmetic by refutation, plus SMT-LIB2 export."""

import itertools
import threading
from pathlib import Path
from typing import Iterable, Optional, Sequence

from app.core.config import ProverSettings, settings
from app.models.term_model import (
    EqF,
    Formula,
    LinearForm,
    Lit,
    LtF,
    NotF,
    Sym,
    Term,
    TermAdd,
    TermSub,
    evaluate_formula,
    formula_symbols,
)
from app.utils.cache import cache
from app.utils.logger import get_logger


logger = get_logger("prover_service")

# ("eq", f) stands for f = 0 and ("le", f) for f <= 0.
Atom = tuple[str, LinearForm]
Clause = list[list[Atom]]


def normalize(t: Term) -> LinearForm:
    if isinstance(t, Lit):
        return LinearForm(t.value)
    if isinstance(t, Sym):
        return LinearForm(0, ((t.id, 1),))
    if isinstance(t, TermAdd):
        return normalize(t.left) + normalize(t.right)
    assert isinstance(t, TermSub)
    return normalize(t.left) - normalize(t.right)


def _is_housekeeping(f: Formula) -> bool:
    return isinstance(f, EqF) and f.left == f.right


def lower(f: Formula, positive: bool = True) -> Clause:
    """Disjunction of conjunctions of atoms equivalent to f (or to ¬f)."""
    if isinstance(f, NotF):
        return lower(f.operand, not positive)
    difference = normalize(f.left) - normalize(f.right)
    if isinstance(f, EqF):
        if positive:
            return [[("eq", difference)]]
        return [[("le", difference.shift(1))], [("le", (-difference).shift(1))]]
    assert isinstance(f, LtF)
    if positive:
        return [[("le", difference.shift(1))]]
    return [[("le", -difference)]]


def _tighten(f: LinearForm) -> Optional[LinearForm]:
    """Integer-tightened f <= 0; None when it is a contradiction, the zero form when trivially true."""
    if f.is_constant():
        return None if f.constant > 0 else LinearForm()
    g = f.content()
    if g == 1:
        return f
    return LinearForm(-((-f.constant) // g), tuple((s, c // g) for s, c in f.coefficients))


def _eliminate_equalities(atoms: Sequence[Atom]) -> Optional[list[LinearForm]]:
    """Substitute unit-coefficient equalities away; None on a contradiction, else the remaining f <= 0 forms."""
    equalities = [f for kind, f in atoms if kind == "eq"]
    inequalities = [f for kind, f in atoms if kind == "le"]
    while equalities:
        f = equalities.pop()
        if f.is_constant():
            if f.constant != 0:
                return None
            continue
        pivot = next((s for s, c in f.coefficients if abs(c) == 1), None)
        if pivot is None:
            if f.constant % f.content() != 0:
                return None
            inequalities += [f, -f]
            continue
        replacement = f.without(pivot).scale(-f.coefficient(pivot))
        equalities = [e.substitute(pivot, replacement) for e in equalities]
        inequalities = [e.substitute(pivot, replacement) for e in inequalities]
    return inequalities


def fourier_motzkin(inequalities: Iterable[LinearForm], max_constraints: int) -> Optional[bool]:
    """True when the system of f <= 0 has no integer solution, False when it has a real one, None when it gives up."""
    current: set[LinearForm] = set()
    for f in inequalities:
        tight = _tighten(f)
        if tight is None:
            return True
        if not tight.is_constant():
            current.add(tight)
    while current:
        occurrences: dict[int, list[int]] = {}
        for f in current:
            for s, c in f.coefficients:
                counts = occurrences.setdefault(s, [0, 0])
                counts[0 if c > 0 else 1] += 1
        pivot = min(occurrences, key=lambda s: (occurrences[s][0] * occurrences[s][1], s))
        upper = [f for f in current if f.coefficient(pivot) > 0]
        lower_bounds = [f for f in current if f.coefficient(pivot) < 0]
        following = {f for f in current if f.coefficient(pivot) == 0}
        for p, n in itertools.product(upper, lower_bounds):
            a, b = p.coefficient(pivot), -n.coefficient(pivot)
            tight = _tighten(p.scale(b) + n.scale(a))
            if tight is None:
                return True
            if not tight.is_constant():
                following.add(tight)
            if len(following) > max_constraints:
                return None
        current = following
    return False


def _refuted(atoms: Sequence[Atom], max_constraints: int) -> bool:
    inequalities = _eliminate_equalities(atoms)
    if inequalities is None:
        return True
    return fourier_motzkin(inequalities, max_constraints) is True


def _key(pc: Sequence[Formula], goal: Formula, max_case_splits: int, max_constraints: int):
    return ("entails", frozenset(pc), goal, max_case_splits, max_constraints)


@cache.cacheable(key_builder=_key, enabled=lambda: settings.prover.memoize)
def decide(pc: Sequence[Formula], goal: Formula, max_case_splits: int, max_constraints: int) -> bool:
    """pc ⊢ goal, sound and incomplete: every case of pc ∪ {¬goal} must be refuted."""
    negated = lower(goal, positive=False)
    units: list[Atom] = []
    splits: list[Clause] = [negated] if len(negated) > 1 else []
    if len(negated) == 1:
        units += negated[0]
    for fact in pc:
        if _is_housekeeping(fact):
            continue
        clause = lower(fact)
        if len(clause) == 1:
            units += clause[0]
        else:
            splits.append(clause)
    if _refuted(units, max_constraints):
        return True
    kept = splits[:max_case_splits]
    if len(kept) < len(splits):
        logger.debug(f"Dropped {len(splits) - len(kept)} disjunctive facts")
    for choice in itertools.product(*kept):
        atoms = list(units)
        for alternative in choice:
            atoms += alternative
        if not _refuted(atoms, max_constraints):
            return False
    return True


def check_sat_ground(formulae: Iterable[Formula]) -> bool:
    """Satisfiability of symbol-free formulae, by evaluation."""
    formulae = list(formulae)
    for f in formulae:
        if formula_symbols(f):
            raise ValueError(f"not a ground formula: {f}")
    return all(evaluate_formula(f, {}) for f in formulae)


def _smt_term(t: Term) -> str:
    if isinstance(t, Lit):
        return str(t.value) if t.value >= 0 else f"(- {-t.value})"
    if isinstance(t, Sym):
        return f"s{t.id}"
    operator = "+" if isinstance(t, TermAdd) else "-"
    return f"({operator} {_smt_term(t.left)} {_smt_term(t.right)})"


def _smt_formula(f: Formula) -> str:
    if isinstance(f, NotF):
        return f"(not {_smt_formula(f.operand)})"
    operator = "=" if isinstance(f, EqF) else "<"
    return f"({operator} {_smt_term(f.left)} {_smt_term(f.right)})"


def export_smtlib(pc: Sequence[Formula], goal: Formula) -> str:
    """QF_LIA script that is unsat exactly when pc entails goal."""
    symbols: set[Sym] = set(formula_symbols(goal))
    for fact in pc:
        symbols |= formula_symbols(fact)
    lines = ["(set-logic QF_LIA)"]
    lines += [f"(declare-const s{s.id} Int)" for s in sorted(symbols, key=lambda s: s.id)]
    lines += [f"(assert {_smt_formula(f)})" for f in pc]
    lines.append(f"(assert (not {_smt_formula(goal)}))")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


class Prover:
    """Entailment service; optionally writes every query as a numbered .smt2 file."""

    def __init__(self, config: Optional[ProverSettings] = None, smtlib_dir: Optional[Path] = None):
        self.config = config or settings.prover
        self.smtlib_dir = Path(smtlib_dir) if smtlib_dir is not None else None
        self._lock = threading.Lock()
        self._queries = 0
        if self.smtlib_dir is not None:
            self.smtlib_dir.mkdir(parents=True, exist_ok=True)

    @property
    def queries(self) -> int:
        return self._queries

    def entails(self, pc: Sequence[Formula], goal: Formula) -> bool:
        with self._lock:
            self._queries += 1
            number = self._queries
        if self.smtlib_dir is not None:
            path = self.smtlib_dir / f"query-{number:06d}.smt2"
            path.write_text(export_smtlib(pc, goal))
            logger.debug(f"Wrote {path}")
        if goal in pc:
            return True
        if not formula_symbols(goal) and check_sat_ground([goal]):
            return True
        if isinstance(goal, EqF) and normalize(goal.left) == normalize(goal.right):
            return True
        return decide(tuple(pc), goal, self.config.max_case_splits, self.config.max_constraints)


_default_prover: Optional[Prover] = None


def entails(pc: Sequence[Formula], goal: Formula) -> bool:
    global _default_prover
    if _default_prover is None:
        _default_prover = Prover()
    return _default_prover.entails(pc, goal)
