import re
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from app.core.config import settings
from app.core.constants import RunStatus
from app.domain.exceptions import CorpusEntryInvalid, ProgramNotVerified, SourceNotReadable, SyntaxException
from app.domain.services.erasure_service import erase_annotations
from app.domain.services.parser_service import parse_program
from app.models.syntax_model import Program
from app.schemas.corpus_schema import (
    CorpusCheck,
    CorpusEntry,
    DifferentialReport,
    FailureReport,
    RunExpectation,
)
from app.schemas.verdict_schema import Verdict
from app.services.run_service import RunService, derive_seed
from app.services.verification_service import VerificationService
from app.utils.logger import get_logger


logger = get_logger("corpus_service")

HEADER_LINE = re.compile(r"^//\s*(provenance|expect-verify|expect-failure|expect-run|differential)\s*:\s*(.*?)\s*$")


def read_source(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise SourceNotReadable(str(path), str(exc)) from exc


def parse_header(path: Path, source: str) -> CorpusEntry:
    """Collect the `// key: value` lines of the leading comment block."""
    fields: dict = {"runs": []}
    for line in source.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if not stripped.startswith("//"):
            break
        match = HEADER_LINE.match(stripped)
        if match is None:
            continue
        key, value = match.groups()
        if key == "expect-run":
            fields["runs"].append(_run_expectation(path, value))
        elif key == "expect-verify":
            fields["expect_verify"] = value
        elif key == "expect-failure":
            fields["expect_failure"] = value
        elif key == "differential":
            fields["differential"] = value.lower() in {"yes", "true", "1"}
        else:
            fields["provenance"] = value
    try:
        return CorpusEntry(name=Path(path).stem, path=Path(path), source=source, **fields)
    except ValidationError as exc:
        raise CorpusEntryInvalid(str(path), str(exc)) from exc


def _run_expectation(path: Path, value: str) -> RunExpectation:
    pairs = {}
    for item in value.split():
        key, sep, raw = item.partition("=")
        if not sep:
            raise CorpusEntryInvalid(str(path), f"expected key=value in expect-run, got {item!r}")
        pairs[key] = raw
    try:
        return RunExpectation(
            depth=int(pairs["depth"]),
            choices=[int(v) for v in pairs["choices"].split(",") if v] if "choices" in pairs else None,
            seed=int(pairs["seed"]) if "seed" in pairs else None,
            status=RunStatus(pairs["status"]),
        )
    except (KeyError, ValueError, ValidationError) as exc:
        raise CorpusEntryInvalid(str(path), f"bad expect-run {value!r}: {exc}") from exc


def failure_text(verdict: Verdict) -> str:
    lines = []
    for result in verdict.failures:
        lines.append(f"failed: {result.name}: {result.reason}")
        lines += result.trace
    return "\n".join(lines)


class CorpusService:
    """Bundled programs, their recorded expectations, and differential replay."""

    def __init__(
        self,
        corpus_dir: Optional[Path] = None,
        verification: Optional[VerificationService] = None,
        runner: Optional[RunService] = None,
    ):
        self.corpus_dir = Path(corpus_dir or settings.corpus.corpus_dir)
        self.verification = verification or VerificationService()
        self.runner = runner or RunService()

    def corpus(self) -> list[CorpusEntry]:
        entries = [parse_header(path, read_source(path)) for path in sorted(self.corpus_dir.glob("*.fvf"))]
        logger.debug(f"Loaded {len(entries)} corpus entries from {self.corpus_dir}")
        return entries

    def entry(self, name: str) -> CorpusEntry:
        path = self.corpus_dir / f"{name}.fvf"
        return parse_header(path, read_source(path))

    def differential_soundness(
        self,
        program: Program,
        trials: Optional[int] = None,
        depth: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> DifferentialReport:
        """Replay a verified program concretely, annotations erased; any failure is a soundness bug."""
        trials = settings.corpus.trials if trials is None else trials
        depth = settings.corpus.depth if depth is None else depth
        seed = settings.corpus.seed if seed is None else seed
        verdict = self.verification.verify(program)
        if not verdict.verified:
            raise ProgramNotVerified(verdict.failures[0].reason or "unknown reason")
        erased = erase_annotations(program)

        def trial(index: int):
            return index, self.runner.run(erased, seed=derive_seed(seed, index), depth=depth)

        with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
            outcomes = list(pool.map(trial, range(trials)))

        report = DifferentialReport(trials=trials)
        for index, result in outcomes:
            if result.status is RunStatus.OK:
                report.ok += 1
            elif result.status is RunStatus.BLOCKED:
                report.blocked += 1
            elif result.status is RunStatus.SCRIPT_EXHAUSTED:
                report.exhausted += 1
            else:
                report.failures.append(
                    FailureReport(
                        trial=index,
                        seed=derive_seed(seed, index),
                        reason=result.reason,
                        choices=result.choices,
                        trace=result.trace,
                    )
                )
        logger.info(f"Differential replay: {report.ok} ok, {report.blocked} blocked, {len(report.failures)} failed")
        return report

    def check_entry(self, entry: CorpusEntry) -> CorpusCheck:
        """Compare one entry against its header expectations."""
        check = CorpusCheck(name=entry.name)
        try:
            program = parse_program(entry.source)
        except SyntaxException as exc:
            if entry.expect_verify != 2:
                check.problems.append(f"expected verify exit {entry.expect_verify}, got 2 ({exc.message})")
            return check
        verdict = self.verification.verify(program)
        code = 0 if verdict.verified else 1
        if code != entry.expect_verify:
            check.problems.append(f"expected verify exit {entry.expect_verify}, got {code}")
        if entry.expect_failure and entry.expect_failure not in failure_text(verdict):
            check.problems.append(f"failure output lacks {entry.expect_failure!r}")
        for expectation in entry.runs:
            result = self.runner.run(
                program,
                choices=expectation.choices,
                seed=expectation.seed,
                depth=expectation.depth,
            )
            if result.status is not expectation.status:
                check.problems.append(
                    f"run at depth {expectation.depth}: expected {expectation.status.value}, got {result.status.value}"
                )
        if entry.differential:
            report = self.differential_soundness(program)
            for failure in report.failures:
                check.problems.append(f"differential trial {failure.trial} failed: {failure.reason}")
        return check

    def check_all(self) -> list[CorpusCheck]:
        return [self.check_entry(entry) for entry in self.corpus()]
