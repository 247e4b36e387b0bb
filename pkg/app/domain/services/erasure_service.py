"""Removal of verification-only annotations from programs."""

from dataclasses import replace

from app.models.syntax_model import (
    BoolA,
    Close,
    Command,
    Eq,
    If,
    IntLit,
    Open,
    Program,
    Seq,
    Skip,
    While,
)


TRIVIAL = BoolA(Eq(IntLit(0), IntLit(0)))


class ErasureService:
    """The concrete semantics ignores annotations; erasing them must not change any run."""

    @staticmethod
    def command(c: Command) -> Command:
        if isinstance(c, (Open, Close)):
            return Skip(loc=c.loc)
        if isinstance(c, Seq):
            return replace(c, first=ErasureService.command(c.first), second=ErasureService.command(c.second))
        if isinstance(c, If):
            return replace(
                c,
                then_branch=ErasureService.command(c.then_branch),
                else_branch=ErasureService.command(c.else_branch),
            )
        if isinstance(c, While):
            return replace(c, invariant=TRIVIAL, body=ErasureService.command(c.body))
        return c

    @staticmethod
    def program(p: Program) -> Program:
        routines = tuple(
            replace(r, pre=TRIVIAL, post=TRIVIAL, body=ErasureService.command(r.body)) for r in p.routines
        )
        return Program((), routines, ErasureService.command(p.main))


erase_annotations = ErasureService.program
