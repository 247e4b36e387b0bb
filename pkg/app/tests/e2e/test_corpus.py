import pytest

from app.core.constants import RunStatus
from app.domain.exceptions import CorpusEntryInvalid, ProgramNotVerified
from app.services.corpus_service import CorpusService, parse_header
from app.services.verification_service import VerificationService


CORPUS_NAMES = [
    "bad_arity",
    "bad_close_builtin",
    "bad_syntax",
    "bad_unknown_routine",
    "clear",
    "clear_noinv",
    "false_assert",
    "fixed_address",
    "leak",
    "pair",
    "range_dispose",
    "range_dispose_noclose",
    "recurse",
    "reverse",
    "swap",
    "swap_wrongpost",
]


@pytest.fixture
def service(corpus_dir):
    return CorpusService(corpus_dir)


@pytest.mark.e2e
class TestCorpus:
    """Test suite for the bundled programs and their expectations."""

    def test_every_program_is_loaded(self, service):
        """Test the corpus lists every bundled file with its header."""
        entries = service.corpus()
        assert [e.name for e in entries] == CORPUS_NAMES
        assert all(e.provenance for e in entries)

    @pytest.mark.slow
    @pytest.mark.parametrize("name", CORPUS_NAMES)
    def test_entry_meets_its_expectations(self, service, name):
        """Test verification, scripted runs and differential replay agree with the header."""
        check = service.check_entry(service.entry(name))
        assert check.passed, check.problems

    def test_headers(self, service):
        """Test header fields are read into the entry."""
        entry = service.entry("fixed_address")
        assert entry.expect_verify == 1
        assert entry.expect_failure == "[42] := 123"
        assert [(r.depth, r.choices, r.status) for r in entry.runs] == [
            (2, [42, 0], RunStatus.OK),
            (2, [43, 0], RunStatus.FAILED),
            (1, [42, 0], RunStatus.BLOCKED),
        ]
        assert not entry.differential

    def test_seeded_expectation(self, service):
        """Test seed-based expectations carry no choices."""
        runs = service.entry("range_dispose").runs
        assert runs[0].seed == 1
        assert runs[0].choices is None
        assert service.entry("range_dispose").differential

    def test_header_stops_at_code(self, tmp_path):
        """Test comment lines after the first code line are not header lines."""
        source = "// expect-verify: 1\nskip\n// expect-verify: 2\n"
        entry = parse_header(tmp_path / "late.fvf", source)
        assert entry.expect_verify == 1
        assert entry.name == "late"

    @pytest.mark.parametrize(
        "header",
        [
            "// expect-run: depth=3 status=ok",
            "// expect-run: depth=3 choices=1 seed=2 status=ok",
            "// expect-run: depth=3 choices=1 status=maybe",
            "// expect-run: depth3",
            "// expect-verify: 7",
        ],
    )
    def test_malformed_headers(self, tmp_path, header):
        """Test malformed header lines are rejected."""
        with pytest.raises(CorpusEntryInvalid):
            parse_header(tmp_path / "broken.fvf", f"{header}\nskip\n")

    def test_expectation_mismatch_is_reported(self, service, tmp_path):
        """Test a wrong expectation shows up as a problem rather than an exception."""
        entry = parse_header(tmp_path / "wrong.fvf", "// expect-verify: 1\nx := 1\n")
        check = service.check_entry(entry)
        assert not check.passed
        assert check.problems == ["expected verify exit 1, got 0"]


@pytest.mark.e2e
class TestDifferentialSoundness:
    """Test suite for concrete replay of verified programs."""

    def test_swap_never_fails(self, service, load_program):
        """Test no seeded trial of verified swap fails concretely."""
        report = service.differential_soundness(load_program("swap"), trials=5, depth=32, seed=9)
        assert report.sound
        assert report.trials == 5
        assert report.ok + report.blocked + report.exhausted == 5

    def test_recursion_only_blocks(self, service, load_program):
        """Test a verified non-terminating program blocks in every trial."""
        report = service.differential_soundness(load_program("recurse"), trials=3, depth=16)
        assert report.blocked == 3

    def test_unverified_program_is_refused(self, service, load_program):
        """Test replay requires a verified program."""
        with pytest.raises(ProgramNotVerified):
            service.differential_soundness(load_program("swap_wrongpost"), trials=1)


@pytest.mark.e2e
class TestVerificationService:
    """Test suite for whole-program verdicts."""

    def test_verdict_for_a_verified_program(self, load_program):
        """Test a verified program reports every routine and the prover queries."""
        verdict = VerificationService().verify(load_program("range_dispose"))
        assert verdict.verified
        assert [r.name for r in verdict.routines] == ["range", "dispose"]
        assert verdict.main.verified
        assert verdict.queries > 0

    def test_verdict_for_a_failing_program(self, load_program):
        """Test failures carry the reason and the path that led to it."""
        verdict = VerificationService().verify(load_program("swap_wrongpost"))
        assert verdict.status == "failed"
        [failure] = verdict.failures
        assert failure.name == "swap"
        assert failure.reason.startswith("postcondition of swap: no chunk")
        assert failure.trace[0].startswith("routine swap(cell1, cell2)")

    def test_verify_source(self):
        """Test source text can be verified directly."""
        assert VerificationService().verify_source("x := malloc(1);\nfree(x)").verified

    def test_routine_trace_includes_main(self, load_program):
        """Test main can be traced like any routine."""
        result = VerificationService().trace_routine(load_program("pair"), "main")
        lines = result.log
        assert result.verified
        assert lines[0].startswith("pair := malloc(2) | Φ:{pair")
        assert lines[-1] == "=> ok"
