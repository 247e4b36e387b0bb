"""Unit tests for semiconcrete execution."""

from app.domain.services.outcome_service import is_block, is_fail, resolve
from app.domain.services.parser_service import parse_assertion, parse_command, parse_program
from app.domain.services.semiconcrete_service import (
    SemiconcreteExecutor,
    consume,
    leakcheck,
    produce,
    routine_failure,
    sc_safe_program,
    scexec,
    valid_routine,
)
from app.models.choice_model import ChoiceScript
from app.models.outcome_model import Single
from app.models.state_model import Chunk, SCState, make_heap


CELL = parse_program("predicate cell(a) = a |-> ?v * 0 < v")


def at(store: dict, *chunks: Chunk) -> SCState:
    return SCState(store=store, heap=make_heap(chunks))


class TestProduceConsume:
    """Test suite for semiconcrete produce and consume."""

    def test_produce_binds_patterns_from_choices(self):
        """Test a produced pattern takes the scripted value."""
        outcome = produce(CELL, parse_assertion("x |-> ?v * 0 < v"), at({"x": 3}))
        resolved = resolve(outcome, ChoiceScript.fixed([7]))
        assert isinstance(resolved, Single)
        assert resolved.state.store == {"x": 3, "v": 7}
        assert resolved.state.heap == (Chunk("|->", (3, 7)),)

    def test_produce_blocks_on_false_condition(self):
        """Test producing a false boolean assertion blocks."""
        outcome = produce(CELL, parse_assertion("x |-> ?v * 0 < v"), at({"x": 3}))
        assert is_block(resolve(outcome, ChoiceScript.fixed([-1])))

    def test_produce_allows_overlapping_chunks(self):
        """Test the semiconcrete heap may hold two cells for one address."""
        outcome = produce(CELL, parse_assertion("x |-> 1 * x |-> 2"), at({"x": 3}))
        assert outcome.state.heap == (Chunk("|->", (3, 1)), Chunk("|->", (3, 2)))

    def test_consume_binds_patterns_from_the_heap(self):
        """Test consuming a pattern reads the chunk's value."""
        outcome = consume(CELL, parse_assertion("x |-> ?v"), at({"x": 3}, Chunk("|->", (3, 9))))
        assert outcome.state.store == {"x": 3, "v": 9}
        assert outcome.state.heap == ()

    def test_consume_picks_the_least_match(self):
        """Test overlapping chunks are consumed in canonical order."""
        state = at({"x": 3}, Chunk("|->", (3, 8)), Chunk("|->", (3, 2)))
        outcome = consume(CELL, parse_assertion("x |-> ?v"), state)
        assert outcome.state.store["v"] == 2

    def test_consume_missing_chunk_fails(self):
        """Test consuming an absent chunk fails with a reason."""
        outcome = consume(CELL, parse_assertion("x |-> ?v"), at({"x": 3}))
        assert is_fail(outcome)
        assert outcome.reason == "no chunk 3 |-> _ in the heap"

    def test_consume_false_condition_fails(self):
        """Test consuming a false boolean assertion fails."""
        outcome = consume(CELL, parse_assertion("0 < x"), at({"x": 0}))
        assert outcome.reason == "0 < x does not hold"

    def test_leakcheck(self):
        """Test an empty heap passes and a leftover chunk fails."""
        assert is_block(leakcheck(SCState()))
        assert "3 |-> 1" in leakcheck(at({}, Chunk("|->", (3, 1)))).reason


class TestGhostCommands:
    """Test suite for open and close."""

    def test_close_folds_the_body(self):
        """Test close consumes the body and adds the predicate chunk."""
        outcome = scexec(CELL, parse_command("close cell(x)"), at({"x": 3}, Chunk("|->", (3, 5))))
        assert isinstance(outcome, Single)
        assert outcome.state.heap == (Chunk("cell", (3,)),)
        assert outcome.state.store == {"x": 3}

    def test_close_fails_when_the_body_is_false(self):
        """Test close checks the body's boolean conjuncts."""
        outcome = scexec(CELL, parse_command("close cell(x)"), at({"x": 3}, Chunk("|->", (3, -5))))
        assert "does not hold" in outcome.reason

    def test_open_unfolds_the_body(self):
        """Test open replaces the predicate chunk by its body."""
        outcome = scexec(CELL, parse_command("open cell(x)"), at({"x": 3}, Chunk("cell", (3,))))
        resolved = resolve(outcome, ChoiceScript.fixed([4]))
        assert resolved.state.heap == (Chunk("|->", (3, 4)),)
        assert resolved.state.store == {"x": 3}

    def test_open_with_wildcard(self):
        """Test a wildcard argument matches any value."""
        program = parse_program("predicate pair(a, b) = a |-> b")
        outcome = scexec(program, parse_command("open pair(x, ?_)"), at({"x": 3}, Chunk("pair", (3, 6))))
        assert outcome.state.heap == (Chunk("|->", (3, 6)),)

    def test_free_needs_every_cell(self):
        """Test free consumes the block and each of its cells."""
        state = at({"p": 10}, Chunk("mb", (10, 2)), Chunk("|->", (10, 0)))
        outcome = scexec(CELL, parse_command("free(p)"), state)
        assert outcome.reason == "free(p): no chunk 11 |-> _ in the heap"


class TestRoutineValidity:
    """Test suite for semiconcrete routine validity under value-sources."""

    def test_swap_is_valid(self, load_program):
        """Test swap meets its contract for scripted cells and values."""
        assert valid_routine(load_program("swap"), "swap", [5, 8, 41, 77])

    def test_wrong_postcondition_is_caught(self, load_program):
        """Test the mutant's postcondition fails with a reason."""
        failure = routine_failure(load_program("swap_wrongpost"), "swap", [5, 8, 41, 77])
        assert failure is not None
        assert failure[-1] == "postcondition of swap: no chunk 5 |-> 41 in the heap"

    def test_range_is_valid_for_one_element(self, load_program):
        """Test range builds and closes a one-element list."""
        assert valid_routine(load_program("range_dispose"), "range", [0, 1, 50, 88, 99, 60, 61, 7])

    def test_range_is_valid_for_the_empty_list(self, load_program):
        """Test range closes the empty list."""
        assert valid_routine(load_program("range_dispose"), "range", [4, 4, 50, 88])

    def test_trace_lines(self, load_program):
        """Test the traced outcome names the routine and its steps."""
        program = load_program("swap")
        outcome = SemiconcreteExecutor(program).valid_routine(program.routine("swap"))
        resolved = resolve(outcome, ChoiceScript.fixed([5, 8, 41, 77]))
        lines = []
        while not isinstance(resolved, Single) and hasattr(resolved, "text"):
            lines.append(resolved.text)
            resolved = resolved.rest
        assert lines[0] == "routine swap(cell1, cell2) | s: {cell1:5, cell2:8} | h: 0"
        assert lines[1] == "produce precondition | s: {cell1:5, cell2:8, v1:41, v2:77} | h: {[5 |-> 41, 8 |-> 77]}"
        assert lines[-1] == "leak check | s: {cell1:5, cell2:8, v1:41, v2:77, value1:41, value2:77} | h: 0"

    def test_safe_program(self, load_program):
        """Test the swap program is safe for a seeded value-source."""
        assert sc_safe_program(load_program("swap"), seed=3)
