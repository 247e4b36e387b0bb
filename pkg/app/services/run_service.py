from typing import Optional, Sequence

from app.core.config import settings
from app.core.constants import RunStatus
from app.domain.services.concrete_service import ExecutionReport, run, run_from
from app.models.choice_model import ChoiceScript
from app.models.state_model import CState
from app.models.syntax_model import Command, Program
from app.schemas.run_schema import RunResult, TrialResult, TrialSummary
from app.utils.formatting import render_chunk
from app.utils.logger import get_logger


logger = get_logger("run_service")


def derive_seed(seed: int, trial: int) -> str:
    """Per-trial seed string; random.Random hashes it deterministically."""
    return f"{seed}:{trial}"


def to_result(report: ExecutionReport) -> RunResult:
    state = report.state
    return RunResult(
        status=report.status,
        store=dict(state.store) if state is not None else {},
        heap=[render_chunk(c) for c in state.heap] if state is not None else [],
        trace=report.trace,
        reason=report.reason,
        choices=report.choices,
    )


class RunService:
    """Concrete runs of main under scripted or seeded choices."""

    def __init__(self, depth: Optional[int] = None):
        self.depth = settings.execution.default_depth if depth is None else depth

    def run(
        self,
        program: Program,
        choices: Optional[Sequence[int]] = None,
        seed: Optional[int | str] = None,
        trace: bool = False,
        depth: Optional[int] = None,
    ) -> RunResult:
        script = ChoiceScript.fixed(list(choices)) if choices is not None else ChoiceScript.seeded(seed or 0)
        report = run(program, self.depth if depth is None else depth, script, trace)
        logger.debug(f"Run finished with {report.status.value} after {len(report.choices)} choices")
        return to_result(report)

    def run_command(
        self,
        program: Program,
        command: Command,
        state: CState,
        script: ChoiceScript,
        depth: Optional[int] = None,
    ) -> RunResult:
        return to_result(run_from(program, command, state, self.depth if depth is None else depth, script))

    def run_trials(self, program: Program, seed: int, trials: int, depth: Optional[int] = None) -> TrialSummary:
        results = []
        for trial in range(trials):
            trial_seed = derive_seed(seed, trial)
            result = self.run(program, seed=trial_seed, depth=depth)
            results.append(TrialResult(trial=trial, seed=trial_seed, result=result))
        summary = TrialSummary(trials=results)
        logger.info(
            f"{trials} trials: {summary.count(RunStatus.OK)} ok, {summary.count(RunStatus.FAILED)} failed, "
            f"{summary.count(RunStatus.BLOCKED)} blocked"
        )
        return summary
