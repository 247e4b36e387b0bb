"""Unit tests for the parser, the printer and the well-formedness checks."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.domain.exceptions import InvalidProgram, ParseError
from app.domain.services.erasure_service import TRIVIAL, erase_annotations
from app.domain.services.parser_service import (
    parse_assertion,
    parse_bool,
    parse_command,
    parse_expr,
    parse_program,
)
from app.domain.services.printer_service import PrinterService, pretty_print
from app.domain.services.wellformed_service import check_well_formed
from app.models.syntax_model import (
    Add,
    Assign,
    BoolA,
    Call,
    Close,
    Eq,
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
    Program,
    Read,
    SepConj,
    Seq,
    Skip,
    Sub,
    Var,
    While,
    Write,
    points_to,
    sequence,
)


SWAP = """
routine swap(cell1, cell2)
  req cell1 |-> ?v1 * cell2 |-> ?v2
  ens cell1 |-> v2 * cell2 |-> v1
=
  value1 := [cell1];
  value2 := [cell2];
  [cell1] := value2;
  [cell2] := value1

a := malloc(1);
b := malloc(1);
swap(a, b)
"""


class TestParser:
    """Test suite for source text to syntax tree."""

    def test_expressions_associate_to_the_left(self):
        """Test a - b + 1 parses as (a - b) + 1."""
        assert parse_expr("a - b + 1") == Add(Sub(Var("a"), Var("b")), IntLit(1))

    def test_negative_literal(self):
        """Test -NAT is a literal."""
        assert parse_expr("-5") == IntLit(-5)
        assert parse_expr("x - -5") == Sub(Var("x"), IntLit(-5))

    def test_boolean_expressions(self):
        """Test comparisons and negation."""
        assert parse_bool("!(a = 0)") == Not(Eq(Var("a"), IntLit(0)))
        assert parse_bool("i < n + 1") == Lt(Var("i"), Add(Var("n"), IntLit(1)))

    def test_points_to_with_pattern(self):
        """Test a pattern binds the last argument of a points-to."""
        assert parse_assertion("x |-> ?v") == points_to(Var("x"), "v")
        assert parse_assertion("x + 1 |-> 0") == points_to(Add(Var("x"), IntLit(1)), IntLit(0))

    def test_separating_conjunction_nests_to_the_right(self):
        """Test a * b * c is a * (b * c)."""
        parsed = parse_assertion("0 = 0 * p(x) * q(?y)")
        assert parsed == SepConj(
            BoolA(Eq(IntLit(0), IntLit(0))),
            SepConj(PredA("p", (Var("x"),)), PredA("q", (), ("y",))),
        )

    def test_conditional_assertion(self):
        """Test a conditional assertion takes the rest of the chain as its else branch."""
        parsed = parse_assertion("if l = 0 then 0 = 0 else mb(l, 2) * list(n)")
        assert isinstance(parsed, IfA)
        assert parsed.else_branch == SepConj(PredA("mb", (Var("l"), IntLit(2))), PredA("list", (Var("n"),)))

    def test_pattern_must_be_a_suffix(self):
        """Test a fixed argument after a pattern is rejected."""
        with pytest.raises(ParseError):
            parse_assertion("p(?x, 1)")

    def test_commands(self):
        """Test every simple command form."""
        assert parse_command("x := malloc(2)") == Malloc("x", 2)
        assert parse_command("x := [p + 1]") == Read("x", Add(Var("p"), IntLit(1)))
        assert parse_command("[p] := 3") == Write(Var("p"), IntLit(3))
        assert parse_command("free(p)") == Free(Var("p"))
        assert parse_command("r := f(1, x)") == Call("f", (IntLit(1), Var("x")), "r")
        assert parse_command("f()") == Call("f", ())
        assert parse_command("open p(x, ?_)") == Open("p", (Var("x"),), 1)
        assert parse_command("close p(x)") == Close("p", (Var("x"),))
        assert parse_command("skip") == Skip()
        assert parse_command('message "hi there"') == Message("hi there")

    def test_sequence_nests_to_the_right(self):
        """Test c1; c2; c3 is c1; (c2; c3)."""
        parsed = parse_command("x := 1; y := 2; skip")
        assert parsed == Seq(Assign("x", IntLit(1)), Seq(Assign("y", IntLit(2)), Skip()))
        assert parsed == sequence(Assign("x", IntLit(1)), Assign("y", IntLit(2)), Skip())

    def test_bodies_are_simple_commands(self):
        """Test sequences inside branches and loop bodies need parentheses."""
        parsed = parse_command("if x = 0 then skip else (y := 1; y := 2); z := 3")
        assert isinstance(parsed, Seq)
        assert isinstance(parsed.first, If)
        assert parsed.first.else_branch == Seq(Assign("y", IntLit(1)), Assign("y", IntLit(2)))
        loop = parse_command("while i < 3 inv 0 = 0 do i := i + 1")
        assert isinstance(loop, While)

    def test_program_without_main_defaults_to_skip(self):
        """Test the main command is optional."""
        program = parse_program("predicate p(x) = 0 = 0")
        assert program.main == Skip()
        assert program.predicate("p").params == ("x",)

    def test_program_declarations(self):
        """Test routines are indexed by name."""
        program = parse_program(SWAP)
        routine = program.routine("swap")
        assert routine.params == ("cell1", "cell2")
        assert routine.pre == SepConj(points_to(Var("cell1"), "v1"), points_to(Var("cell2"), "v2"))
        assert program.routine("missing") is None

    def test_comments_are_ignored(self):
        """Test line comments are skipped."""
        assert parse_command("// nothing\nskip // done") == Skip()

    def test_keywords_are_not_identifiers(self):
        """Test a keyword cannot be assigned."""
        with pytest.raises(ParseError):
            parse_command("skip := 1")

    def test_locations_are_recorded(self):
        """Test commands carry their line and column."""
        parsed = parse_command("skip;\n  x := 1")
        assert parsed.second.loc == (2, 3)

    def test_parse_error_position(self):
        """Test the error names the offending line and column."""
        with pytest.raises(ParseError) as exc_info:
            parse_program("x := 1;\ny := +")
        assert exc_info.value.line == 2
        assert exc_info.value.error_code == "PARSE_ERROR"

    def test_unexpected_end_of_input(self):
        """Test a truncated program reports the end of input."""
        with pytest.raises(ParseError) as exc_info:
            parse_program("x := (1")
        assert "end of input" in exc_info.value.message


class TestPrinter:
    """Test suite for syntax tree back to text."""

    def test_program_round_trip(self):
        """Test printing then parsing yields the same program."""
        program = parse_program(SWAP)
        assert parse_program(pretty_print(program)) == program

    def test_parenthesises_nested_sequences(self):
        """Test branch bodies that are sequences are parenthesised."""
        command = If(Eq(Var("x"), IntLit(0)), Seq(Skip(), Skip()), Skip())
        assert PrinterService.command(command) == "if x = 0 then (skip; skip) else skip"

    def test_right_operand_is_parenthesised(self):
        """Test a - (b - c) keeps its grouping."""
        e = Sub(Var("a"), Sub(Var("b"), Var("c")))
        assert PrinterService.expr(e) == "a - (b - c)"
        assert parse_expr(PrinterService.expr(e)) == e

    def test_header_shows_only_the_head(self):
        """Test trace headers of compound commands."""
        loop = parse_command("while i < n inv 0 = 0 do (i := i + 1; skip)")
        assert PrinterService.header(loop) == "while i < n"


names = st.sampled_from(["a", "b", "x", "cell"])
expressions = st.recursive(
    st.one_of(st.integers(-20, 20).map(IntLit), names.map(Var)),
    lambda inner: st.one_of(st.builds(Add, inner, inner), st.builds(Sub, inner, inner)),
    max_leaves=6,
)
booleans = st.recursive(
    st.one_of(st.builds(Eq, expressions, expressions), st.builds(Lt, expressions, expressions)),
    lambda inner: inner.map(Not),
    max_leaves=3,
)
simple_assertions = st.one_of(
    booleans.map(BoolA),
    st.builds(lambda a, v: PredA("|->", (a, v)), expressions, expressions),
    st.builds(lambda a, p: PredA("|->", (a,), (p,)), expressions, names),
    st.builds(
        lambda args, pats: PredA("p", tuple(args), tuple(pats)),
        st.lists(expressions, max_size=2),
        st.lists(names, max_size=2),
    ),
)
assertions = st.recursive(
    simple_assertions,
    lambda inner: st.one_of(st.builds(SepConj, inner, inner), st.builds(IfA, booleans, inner, inner)),
    max_leaves=5,
)
commands = st.recursive(
    st.one_of(
        st.builds(Assign, names, expressions),
        st.builds(Malloc, names, st.integers(1, 3)),
        st.builds(Read, names, expressions),
        st.builds(Write, expressions, expressions),
        st.builds(Free, expressions),
        st.builds(
            lambda args, target: Call("f", tuple(args), target),
            st.lists(expressions, max_size=2),
            st.one_of(st.none(), names),
        ),
        st.builds(lambda args, n: Open("p", tuple(args), n), st.lists(expressions, max_size=2), st.integers(0, 2)),
        st.builds(lambda args: Close("p", tuple(args)), st.lists(expressions, max_size=2)),
        st.just(Skip()),
    ),
    lambda inner: st.one_of(
        st.builds(Seq, inner, inner),
        st.builds(If, booleans, inner, inner),
        st.builds(While, booleans, assertions, inner),
    ),
    max_leaves=6,
)


@pytest.mark.property
class TestPrintParseProperty:
    """Printing is a right inverse of parsing."""

    @given(expressions)
    def test_expressions(self, e):
        """Test parse(print(e)) == e for expressions."""
        assert parse_expr(PrinterService.expr(e)) == e

    @given(assertions)
    def test_assertions(self, a):
        """Test parse(print(a)) == a for assertions."""
        assert parse_assertion(PrinterService.assertion(a)) == a

    @given(commands)
    def test_commands(self, c):
        """Test parse(print(c)) is c up to Seq reassociation."""
        printed = PrinterService.command(c)
        assert PrinterService.command(parse_command(printed)) == printed


class TestWellFormedness:
    """Test suite for static checks."""

    def kinds(self, source: str) -> list[str]:
        return [error.kind for error in check_well_formed(parse_program(source, check=False))]

    def test_clean_program(self):
        """Test a correct program has no violations."""
        assert self.kinds(SWAP) == []

    def test_unknown_routine(self):
        """Test calls to undeclared routines."""
        assert self.kinds("foo(1)") == ["unknown-routine"]

    def test_call_arity(self):
        """Test argument count mismatches."""
        assert self.kinds("routine f(a) req 0 = 0 ens 0 = 0 = skip f(1, 2)") == ["arity-mismatch"]

    def test_builtin_predicates_cannot_be_opened(self):
        """Test open and close reject mb and points-to."""
        assert self.kinds("x := malloc(1); close mb(x, 1)") == ["builtin-predicate"]

    def test_unknown_predicate(self):
        """Test assertions over undeclared predicates."""
        assert self.kinds("routine f(a) req q(a) ens 0 = 0 = skip") == ["unknown-predicate"]

    def test_open_counts_wildcards(self):
        """Test wildcards count towards the predicate arity."""
        source = "predicate p(a, b) = 0 = 0\nopen p(1, ?_); open p(1)"
        assert self.kinds(source) == ["arity-mismatch"]

    def test_unassigned_variables_read_as_zero(self):
        """Test reading a never-assigned variable is allowed since every store is total."""
        assert self.kinds("x := y + 1; [x] := z") == []

    def test_assertion_arity(self):
        """Test predicate assertions with the wrong number of arguments."""
        assert self.kinds("predicate p(a) = 0 = 0\nroutine f(a) req p(a, a) ens 0 = 0 = skip") == ["arity-mismatch"]

    def test_duplicates_and_reserved_names(self):
        """Test duplicate declarations, repeated parameters and reserved names."""
        source = (
            "predicate p(a) = 0 = 0\npredicate p(a) = 0 = 0\n"
            "routine f(x, x) req 0 = 0 ens 0 = 0 = skip\n"
            "routine g(result) req 0 = 0 ens 0 = 0 = skip\n"
            "routine h(v) req v |-> ?v ens 0 = 0 = skip"
        )
        assert self.kinds(source) == [
            "duplicate-definition",
            "duplicate-parameter",
            "reserved-name",
            "pattern-shadows-parameter",
        ]

    def test_parse_program_raises_invalid_program(self):
        """Test checked parsing raises with every violation."""
        with pytest.raises(InvalidProgram) as exc_info:
            parse_program("foo(1); bar()")
        assert len(exc_info.value.errors) == 2
        assert exc_info.value.errors[0].line == 1


class TestErasure:
    """Test suite for annotation erasure."""

    def test_erases_contracts_and_ghost_commands(self):
        """Test contracts, invariants, open and close disappear."""
        program = erase_annotations(parse_program(SWAP + "; close p(a)", check=False))
        routine = program.routine("swap")
        assert routine.pre == TRIVIAL and routine.post == TRIVIAL
        assert program.predicates == ()
        assert Skip() in (program.main.second.second.first, program.main.second.second.second)

    def test_erases_loop_invariants(self):
        """Test loop invariants become trivial."""
        program = erase_annotations(Program(main=parse_command("while i < 3 inv p(i) do open p(i)")))
        assert program.main == While(Lt(Var("i"), IntLit(3)), TRIVIAL, Skip())
