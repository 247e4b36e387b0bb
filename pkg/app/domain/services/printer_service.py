"""Syntax tree back to source text that parses to the same tree."""

from app.core.constants import POINTS_TO
from app.models.syntax_model import (
    Add,
    Assertion,
    Assign,
    BoolA,
    BoolExpr,
    Call,
    Close,
    Command,
    Eq,
    Expr,
    Free,
    If,
    IfA,
    IntLit,
    Lt,
    Malloc,
    Message,
    Not,
    Open,
    PredA,
    PredicateDef,
    Program,
    Read,
    RoutineDef,
    SepConj,
    Seq,
    Skip,
    Sub,
    Var,
    While,
    Write,
)


class PrinterService:
    """Pure pretty-printer; parenthesises exactly where the grammar needs it."""

    @staticmethod
    def expr(e: Expr) -> str:
        if isinstance(e, IntLit):
            return str(e.value)
        if isinstance(e, Var):
            return e.name
        operator = "+" if isinstance(e, Add) else "-"
        right = PrinterService.expr(e.right)
        if isinstance(e.right, (Add, Sub)):
            right = f"({right})"
        return f"{PrinterService.expr(e.left)} {operator} {right}"

    @staticmethod
    def bool_expr(b: BoolExpr) -> str:
        if isinstance(b, Not):
            return f"!({PrinterService.bool_expr(b.operand)})"
        operator = "=" if isinstance(b, Eq) else "<"
        return f"{PrinterService.expr(b.left)} {operator} {PrinterService.expr(b.right)}"

    @staticmethod
    def pred(a: PredA) -> str:
        patterns = [f"?{p}" for p in a.patterns]
        if a.predicate == POINTS_TO and len(a.args) >= 1 and a.arity == 2:
            value = patterns[0] if patterns else PrinterService.expr(a.args[1])
            return f"{PrinterService.expr(a.args[0])} |-> {value}"
        arguments = [PrinterService.expr(arg) for arg in a.args] + patterns
        return f"{a.predicate}({', '.join(arguments)})"

    @staticmethod
    def assertion(a: Assertion) -> str:
        if isinstance(a, BoolA):
            return PrinterService.bool_expr(a.condition)
        if isinstance(a, PredA):
            return PrinterService.pred(a)
        if isinstance(a, SepConj):
            left = PrinterService.assertion(a.left)
            if isinstance(a.left, (SepConj, IfA)):
                left = f"({left})"
            return f"{left} * {PrinterService.assertion(a.right)}"
        then_part = PrinterService.assertion(a.then_branch)
        if isinstance(a.then_branch, IfA):
            then_part = f"({then_part})"
        return (
            f"if {PrinterService.bool_expr(a.condition)} then {then_part} "
            f"else {PrinterService.assertion(a.else_branch)}"
        )

    @staticmethod
    def _simple(c: Command) -> str:
        text = PrinterService.command(c)
        return f"({text})" if isinstance(c, Seq) else text

    @staticmethod
    def command(c: Command) -> str:
        if isinstance(c, Seq):
            return f"{PrinterService._simple(c.first)}; {PrinterService.command(c.second)}"
        if isinstance(c, Assign):
            return f"{c.target} := {PrinterService.expr(c.value)}"
        if isinstance(c, Malloc):
            return f"{c.target} := malloc({c.size})"
        if isinstance(c, Read):
            return f"{c.target} := [{PrinterService.expr(c.address)}]"
        if isinstance(c, Write):
            return f"[{PrinterService.expr(c.address)}] := {PrinterService.expr(c.value)}"
        if isinstance(c, Free):
            return f"free({PrinterService.expr(c.address)})"
        if isinstance(c, Call):
            call = f"{c.routine}({', '.join(PrinterService.expr(a) for a in c.args)})"
            return f"{c.target} := {call}" if c.target is not None else call
        if isinstance(c, If):
            return (
                f"if {PrinterService.bool_expr(c.condition)} then {PrinterService._simple(c.then_branch)} "
                f"else {PrinterService._simple(c.else_branch)}"
            )
        if isinstance(c, While):
            return (
                f"while {PrinterService.bool_expr(c.condition)} inv {PrinterService.assertion(c.invariant)} "
                f"do {PrinterService._simple(c.body)}"
            )
        if isinstance(c, Open):
            arguments = [PrinterService.expr(a) for a in c.args] + ["?_"] * c.wildcards
            return f"open {c.predicate}({', '.join(arguments)})"
        if isinstance(c, Close):
            return f"close {c.predicate}({', '.join(PrinterService.expr(a) for a in c.args)})"
        if isinstance(c, Skip):
            return "skip"
        if isinstance(c, Message):
            return f'message "{c.text}"'
        raise TypeError(f"not a command: {c!r}")

    @staticmethod
    def header(c: Command) -> str:
        """One-line label for trace output; compound commands show only their head."""
        if isinstance(c, If):
            return f"if {PrinterService.bool_expr(c.condition)}"
        if isinstance(c, While):
            return f"while {PrinterService.bool_expr(c.condition)}"
        if isinstance(c, Seq):
            return PrinterService.header(c.first)
        return PrinterService.command(c)

    @staticmethod
    def predicate_def(d: PredicateDef) -> str:
        return f"predicate {d.name}({', '.join(d.params)}) =\n  {PrinterService.assertion(d.body)}"

    @staticmethod
    def routine_def(d: RoutineDef) -> str:
        return (
            f"routine {d.name}({', '.join(d.params)})\n"
            f"  req {PrinterService.assertion(d.pre)}\n"
            f"  ens {PrinterService.assertion(d.post)}\n"
            f"=\n  {PrinterService.command(d.body)}"
        )

    @staticmethod
    def program(p: Program) -> str:
        parts = [PrinterService.predicate_def(d) for d in p.predicates]
        parts += [PrinterService.routine_def(d) for d in p.routines]
        parts.append(PrinterService.command(p.main))
        return "\n\n".join(parts) + "\n"


pretty_print = PrinterService.program
