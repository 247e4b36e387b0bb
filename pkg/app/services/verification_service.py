import time
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from app.core.config import settings
from app.domain.exceptions import UnknownRoutine
from app.domain.services.outcome_service import OutcomePath, counterexample, paths
from app.domain.services.parser_service import parse_program
from app.domain.services.prover_service import Prover
from app.domain.services.symbolic_service import smain_outcome, svalid_outcome
from app.models.outcome_model import Outcome
from app.models.syntax_model import Program
from app.schemas.verdict_schema import RoutineResult, Verdict
from app.utils.logger import get_logger


logger = get_logger("verification_service")

MAIN = "main"


def render_paths(found: list[OutcomePath]) -> list[str]:
    """Step log of every explored path."""
    lines: list[str] = []
    for number, path in enumerate(found, 1):
        indent = "  " if len(found) > 1 else ""
        if len(found) > 1:
            lines.append(f"path {number}:")
        lines += [f"{indent}{line}" for line in path.lines]
        if path.kind == "failed":
            lines.append(f"{indent}=> failed: {path.reason}")
        elif path.kind == "blocked":
            lines.append(f"{indent}=> closed")
        else:
            lines.append(f"{indent}=> ok")
    return lines


class VerificationService:
    """Symbolic verification of whole programs, one routine per task."""

    def __init__(self, prover: Optional[Prover] = None, max_workers: Optional[int] = None):
        self.prover = prover or Prover()
        self.max_workers = max_workers or settings.max_workers

    def verify_source(self, source: str, trace: bool = False) -> Verdict:
        return self.verify(parse_program(source), trace)

    def verify(self, program: Program, trace: bool = False) -> Verdict:
        started = time.perf_counter()
        names = [r.name for r in program.routines]
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            routines = list(pool.map(lambda name: self.verify_routine(program, name, trace), names))
        main = self._result(MAIN, smain_outcome(program, self.prover), trace)
        elapsed = (time.perf_counter() - started) * 1000
        verified = all(r.verified for r in routines) and main.verified
        logger.info(f"Verified {len(routines)} routines in {elapsed:.1f} ms: {'ok' if verified else 'failed'}")
        return Verdict(
            status="verified" if verified else "failed",
            routines=routines,
            main=main,
            elapsed_ms=elapsed,
            queries=self.prover.queries,
        )

    def verify_routine(self, program: Program, name: str, trace: bool = False) -> RoutineResult:
        if program.routine(name) is None:
            raise UnknownRoutine(name)
        result = self._result(name, svalid_outcome(program, name, self.prover), trace)
        logger.debug(f"Routine {name}: {'verified' if result.verified else result.reason}")
        return result

    def trace_routine(self, program: Program, name: str) -> RoutineResult:
        """Verdict for one routine (or main) carrying the full step log, every path included."""
        if name == MAIN:
            outcome = smain_outcome(program, self.prover)
        elif program.routine(name) is None:
            raise UnknownRoutine(name)
        else:
            outcome = svalid_outcome(program, name, self.prover)
        return self._result(name, outcome, trace=True)

    @staticmethod
    def _result(name: str, outcome: Outcome, trace: bool) -> RoutineResult:
        failure = counterexample(outcome, lambda s, a: True)
        log = render_paths(paths(outcome)) if trace else []
        if failure is None:
            return RoutineResult(name=name, verified=True, log=log)
        return RoutineResult(name=name, verified=False, reason=failure[-1], trace=failure[:-1], log=log)
