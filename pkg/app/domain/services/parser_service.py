"""Source text to syntax tree, via a lark Earley parser and a Transformer."""

import functools
from typing import Any

import lark
from lark import Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from app.core.constants import KEYWORDS, POINTS_TO
from app.domain.exceptions import InvalidProgram, ParseError
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
from app.utils.logger import get_logger


logger = get_logger("parser_service")

_KEYWORD_ALTERNATION = "|".join(sorted(KEYWORDS))

# `if`/`while` bodies are simple commands: sequences inside them need parentheses.
# A conditional assertion may only end a `*` chain; elsewhere it needs parentheses.
GRAMMAR = r"""
start: decl* command?

?decl: "predicate" IDENT "(" params ")" "=" assertion                                   -> preddef
     | "routine" IDENT "(" params ")" "req" assertion "ens" assertion "=" command        -> routine

params: (IDENT ("," IDENT)*)?

command: simple (";" simple)*

?simple: IDENT ":=" expr                          -> assign
       | IDENT ":=" "malloc" "(" NAT ")"          -> malloc
       | IDENT ":=" "[" expr "]"                  -> read
       | IDENT ":=" IDENT "(" args ")"            -> call_ret
       | IDENT "(" args ")"                       -> call
       | "[" expr "]" ":=" expr                   -> write
       | "free" "(" expr ")"                      -> free
       | "if" bexpr "then" simple "else" simple   -> if_cmd
       | "while" bexpr "inv" assertion "do" simple -> while_cmd
       | "open" IDENT "(" openargs ")"            -> open_cmd
       | "close" IDENT "(" args ")"               -> close_cmd
       | "skip"                                   -> skip
       | "message" STRING                         -> message
       | "(" command ")"

args: (expr ("," expr)*)?
openargs: (openarg ("," openarg)*)?
?openarg: expr
        | WILDCARD

assertion: (aatom "*")* last_atom
?last_atom: aatom
          | "if" bexpr "then" assertion "else" assertion   -> if_assert
?aatom: bexpr                     -> bool_assert
      | IDENT "(" aargs ")"       -> pred_assert
      | expr "|->" aarg           -> points_to
      | "(" assertion ")"

aargs: (aarg ("," aarg)*)?
?aarg: expr
     | "?" IDENT                  -> pattern

?bexpr: expr "=" expr             -> eq
      | expr "<" expr             -> lt
      | "!" bexpr                 -> negation
      | "(" bexpr ")"

expr: term (ADDOP term)*
?term: NAT                        -> nat
     | "-" NAT                    -> neg
     | IDENT                      -> var
     | "(" expr ")"

ADDOP: "+" | "-"
WILDCARD: "?_"
IDENT: /(?!(?:KEYWORDS)\b)[A-Za-z_][A-Za-z0-9_]*/
NAT: /[0-9]+/
STRING: /"[ !#-~]*"/
COMMENT: /\/\/[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
""".replace(
    "KEYWORDS", _KEYWORD_ALTERNATION
)

START_RULES = ["start", "command", "assertion", "bexpr", "expr"]


@functools.cache
def _parser() -> lark.Lark:
    """Create/retrieve a singleton Lark parser from the language grammar."""
    return lark.Lark(GRAMMAR, start=START_RULES, parser="earley", propagate_positions=True)


class _Pattern:
    def __init__(self, name: str):
        self.name = name


def _location(meta: Any):
    line = getattr(meta, "line", None)
    if line is None:
        return None
    return (line, meta.column)


def _fail(meta: Any, message: str) -> ParseError:
    loc = _location(meta) or (0, 0)
    return ParseError(message, loc[0], loc[1])


@v_args(meta=True)
class _ToSyntax(Transformer):
    """Turns lark parse trees into syntax_model nodes."""

    # Expressions
    def nat(self, meta, children) -> Expr:
        return IntLit(int(children[0]))

    def neg(self, meta, children) -> Expr:
        return IntLit(-int(children[0]))

    def var(self, meta, children) -> Expr:
        return Var(str(children[0]))

    def expr(self, meta, children) -> Expr:
        result = children[0]
        for operator, operand in zip(children[1::2], children[2::2]):
            result = Add(result, operand) if operator == "+" else Sub(result, operand)
        return result

    def eq(self, meta, children) -> BoolExpr:
        return Eq(children[0], children[1])

    def lt(self, meta, children) -> BoolExpr:
        return Lt(children[0], children[1])

    def negation(self, meta, children) -> BoolExpr:
        return Not(children[0])

    # Assertions
    def pattern(self, meta, children) -> _Pattern:
        return _Pattern(str(children[0]))

    def aargs(self, meta, children) -> list:
        return list(children)

    def bool_assert(self, meta, children) -> Assertion:
        return BoolA(children[0])

    def pred_assert(self, meta, children) -> Assertion:
        name, arguments = str(children[0]), children[1]
        fixed: list[Expr] = []
        patterns: list[str] = []
        for argument in arguments:
            if isinstance(argument, _Pattern):
                patterns.append(argument.name)
            elif patterns:
                raise _fail(meta, f"fixed argument after a pattern in {name}(...)")
            else:
                fixed.append(argument)
        return PredA(name, tuple(fixed), tuple(patterns), loc=_location(meta))

    def points_to(self, meta, children) -> Assertion:
        address, value = children
        if isinstance(value, _Pattern):
            return PredA(POINTS_TO, (address,), (value.name,), loc=_location(meta))
        return PredA(POINTS_TO, (address, value), loc=_location(meta))

    def if_assert(self, meta, children) -> Assertion:
        return IfA(children[0], children[1], children[2])

    def assertion(self, meta, children) -> Assertion:
        result = children[-1]
        for conjunct in reversed(children[:-1]):
            result = SepConj(conjunct, result)
        return result

    # Commands
    def args(self, meta, children) -> tuple:
        return tuple(children)

    def openargs(self, meta, children) -> list:
        return list(children)

    def assign(self, meta, children) -> Command:
        return Assign(str(children[0]), children[1], loc=_location(meta))

    def malloc(self, meta, children) -> Command:
        return Malloc(str(children[0]), int(children[1]), loc=_location(meta))

    def read(self, meta, children) -> Command:
        return Read(str(children[0]), children[1], loc=_location(meta))

    def call_ret(self, meta, children) -> Command:
        return Call(str(children[1]), children[2], target=str(children[0]), loc=_location(meta))

    def call(self, meta, children) -> Command:
        return Call(str(children[0]), children[1], loc=_location(meta))

    def write(self, meta, children) -> Command:
        return Write(children[0], children[1], loc=_location(meta))

    def free(self, meta, children) -> Command:
        return Free(children[0], loc=_location(meta))

    def if_cmd(self, meta, children) -> Command:
        return If(children[0], children[1], children[2], loc=_location(meta))

    def while_cmd(self, meta, children) -> Command:
        return While(children[0], children[1], children[2], loc=_location(meta))

    def open_cmd(self, meta, children) -> Command:
        name, arguments = str(children[0]), children[1]
        fixed: list[Expr] = []
        wildcards = 0
        for argument in arguments:
            if isinstance(argument, lark.Token) and argument.type == "WILDCARD":
                wildcards += 1
            elif wildcards:
                raise _fail(meta, f"fixed argument after ?_ in open {name}(...)")
            else:
                fixed.append(argument)
        return Open(name, tuple(fixed), wildcards, loc=_location(meta))

    def close_cmd(self, meta, children) -> Command:
        return Close(str(children[0]), children[1], loc=_location(meta))

    def skip(self, meta, children) -> Command:
        return Skip(loc=_location(meta))

    def message(self, meta, children) -> Command:
        return Message(str(children[0])[1:-1], loc=_location(meta))

    def command(self, meta, children) -> Command:
        result = children[-1]
        for command in reversed(children[:-1]):
            result = Seq(command, result)
        return result

    # Declarations
    def params(self, meta, children) -> tuple:
        return tuple(str(c) for c in children)

    def preddef(self, meta, children) -> PredicateDef:
        return PredicateDef(str(children[0]), children[1], children[2], loc=_location(meta))

    def routine(self, meta, children) -> RoutineDef:
        name, params, pre, post, body = children
        return RoutineDef(str(name), params, pre, post, body, loc=_location(meta))

    def start(self, meta, children) -> Program:
        predicates = tuple(c for c in children if isinstance(c, PredicateDef))
        routines = tuple(c for c in children if isinstance(c, RoutineDef))
        mains = [c for c in children if not isinstance(c, (PredicateDef, RoutineDef))]
        return Program(predicates, routines, mains[0] if mains else Skip())


def _describe_terminal(name: str) -> str:
    try:
        pattern = _parser().get_terminal(name).pattern
    except KeyError:
        return name
    if pattern.type == "str":
        return f"'{pattern.value}'"
    return name


def _end_position(source: str) -> tuple[int, int]:
    lines = source.split("\n")
    return len(lines), len(lines[-1]) + 1


def _translate(error: UnexpectedInput, source: str) -> ParseError:
    if isinstance(error, UnexpectedEOF):
        line, column = _end_position(source)
        return ParseError("unexpected end of input", line, column, map(_describe_terminal, error.expected))
    if isinstance(error, UnexpectedCharacters):
        found = source[error.pos_in_stream] if 0 <= error.pos_in_stream < len(source) else "end of input"
        return ParseError(
            f"unexpected {found!r}",
            error.line,
            error.column,
            map(_describe_terminal, error.allowed or ()),
        )
    if isinstance(error, UnexpectedToken):
        if error.token.type == "$END":
            line, column = _end_position(source)
            return ParseError("unexpected end of input", line, column, map(_describe_terminal, error.expected))
        return ParseError(
            f"unexpected {str(error.token)!r}",
            error.token.line,
            error.token.column,
            map(_describe_terminal, error.expected),
        )
    line = getattr(error, "line", 0) or 0
    column = getattr(error, "column", 0) or 0
    return ParseError(str(error), line, column)


def _parse(source: str, start: str):
    try:
        tree = _parser().parse(source, start=start)
    except UnexpectedInput as error:
        raise _translate(error, source) from None
    try:
        return _ToSyntax().transform(tree)
    except VisitError as error:
        if isinstance(error.orig_exc, ParseError):
            raise error.orig_exc from None
        raise


def parse_program(source: str, check: bool = True) -> Program:
    """Parse a whole program; with check, static violations raise InvalidProgram."""
    from app.domain.services.wellformed_service import WellFormednessService

    program = _parse(source, "start")
    logger.debug(f"Parsed {len(program.predicates)} predicates and {len(program.routines)} routines")
    if check:
        errors = WellFormednessService.check(program)
        if errors:
            raise InvalidProgram(errors)
    return program


def parse_command(source: str) -> Command:
    return _parse(source, "command")


def parse_assertion(source: str) -> Assertion:
    return _parse(source, "assertion")


def parse_bool(source: str) -> BoolExpr:
    return _parse(source, "bexpr")


def parse_expr(source: str) -> Expr:
    return _parse(source, "expr")
