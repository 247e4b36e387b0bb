"""Static well-formedness of parsed programs."""

from typing import Iterable, Optional

from app.core.constants import BUILTIN_PREDICATES, POINTS_TO, RESULT_VAR
from app.domain.exceptions import StaticError
from app.models.syntax_model import (
    Assertion,
    Call,
    Close,
    Command,
    If,
    IfA,
    Location,
    Open,
    PredA,
    Program,
    SepConj,
    Seq,
    While,
    pattern_vars,
)


def _error(kind: str, message: str, loc: Location = None) -> StaticError:
    if loc is None:
        return StaticError(kind, message)
    return StaticError(kind, message, loc[0], loc[1])


class WellFormednessService:
    """Pure checks that every executor relies on."""

    @staticmethod
    def check(program: Program) -> list[StaticError]:
        """All violations, in declaration order."""
        errors: list[StaticError] = []
        errors += WellFormednessService._duplicates(program)
        for definition in program.predicates:
            errors += WellFormednessService._params(definition.name, definition.params, definition.loc)
            if definition.name in BUILTIN_PREDICATES:
                errors.append(_error("reserved-name", f"predicate {definition.name} is built in", definition.loc))
            errors += WellFormednessService._assertion(program, definition.body)
        for routine in program.routines:
            errors += WellFormednessService._params(routine.name, routine.params, routine.loc)
            if RESULT_VAR in routine.params:
                errors.append(
                    _error("reserved-name", f"routine {routine.name} declares parameter {RESULT_VAR}", routine.loc)
                )
            clash = sorted(pattern_vars(routine.pre) & set(routine.params))
            if clash:
                errors.append(
                    _error(
                        "pattern-shadows-parameter",
                        f"precondition of {routine.name} rebinds parameter(s) {', '.join(clash)}",
                        routine.loc,
                    )
                )
            errors += WellFormednessService._assertion(program, routine.pre)
            errors += WellFormednessService._assertion(program, routine.post)
            errors += WellFormednessService._command(program, routine.body)
        errors += WellFormednessService._command(program, program.main)
        return errors

    @staticmethod
    def _duplicates(program: Program) -> list[StaticError]:
        errors = []
        seen: set[str] = set()
        for definition in program.predicates:
            if definition.name in seen:
                errors.append(_error("duplicate-definition", f"predicate {definition.name}", definition.loc))
            seen.add(definition.name)
        seen = set()
        for routine in program.routines:
            if routine.name in seen:
                errors.append(_error("duplicate-definition", f"routine {routine.name}", routine.loc))
            seen.add(routine.name)
        return errors

    @staticmethod
    def _params(owner: str, params: Iterable[str], loc: Location) -> list[StaticError]:
        names = list(params)
        repeated = sorted({p for p in names if names.count(p) > 1})
        if repeated:
            return [_error("duplicate-parameter", f"{owner}({', '.join(repeated)})", loc)]
        return []

    @staticmethod
    def _arity(program: Program, name: str) -> Optional[int]:
        if name in BUILTIN_PREDICATES:
            return BUILTIN_PREDICATES[name]
        definition = program.predicate(name)
        return None if definition is None else len(definition.params)

    @staticmethod
    def _assertion(program: Program, a: Assertion) -> list[StaticError]:
        if isinstance(a, PredA):
            expected = WellFormednessService._arity(program, a.predicate)
            if expected is None:
                return [_error("unknown-predicate", a.predicate, a.loc)]
            if expected != a.arity:
                return [_error("arity-mismatch", f"{a.predicate} takes {expected} arguments, got {a.arity}", a.loc)]
            if a.predicate == POINTS_TO and not a.args:
                return [_error("unbound-address", "points-to needs a fixed address", a.loc)]
            return []
        if isinstance(a, SepConj):
            return WellFormednessService._assertion(program, a.left) + WellFormednessService._assertion(
                program, a.right
            )
        if isinstance(a, IfA):
            return WellFormednessService._assertion(program, a.then_branch) + WellFormednessService._assertion(
                program, a.else_branch
            )
        return []

    @staticmethod
    def _command(program: Program, c: Command) -> list[StaticError]:
        if isinstance(c, Seq):
            return WellFormednessService._command(program, c.first) + WellFormednessService._command(
                program, c.second
            )
        if isinstance(c, If):
            return WellFormednessService._command(program, c.then_branch) + WellFormednessService._command(
                program, c.else_branch
            )
        if isinstance(c, While):
            return WellFormednessService._assertion(program, c.invariant) + WellFormednessService._command(
                program, c.body
            )
        if isinstance(c, Call):
            routine = program.routine(c.routine)
            if routine is None:
                return [_error("unknown-routine", c.routine, c.loc)]
            if len(routine.params) != len(c.args):
                return [
                    _error(
                        "arity-mismatch",
                        f"{c.routine} takes {len(routine.params)} arguments, got {len(c.args)}",
                        c.loc,
                    )
                ]
            return []
        if isinstance(c, (Open, Close)):
            keyword = "open" if isinstance(c, Open) else "close"
            if c.predicate in BUILTIN_PREDICATES:
                return [_error("builtin-predicate", f"cannot {keyword} built-in {c.predicate}", c.loc)]
            definition = program.predicate(c.predicate)
            if definition is None:
                return [_error("unknown-predicate", c.predicate, c.loc)]
            given = len(c.args) + (c.wildcards if isinstance(c, Open) else 0)
            if given != len(definition.params):
                return [
                    _error(
                        "arity-mismatch",
                        f"{c.predicate} takes {len(definition.params)} arguments, got {given}",
                        c.loc,
                    )
                ]
        return []


check_well_formed = WellFormednessService.check
