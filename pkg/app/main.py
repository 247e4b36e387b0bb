import sys
from pathlib import Path
from typing import Optional

import click

from app.api.exception_handlers import handle_service_exceptions
from app.core.config import settings
from app.core.constants import ExitCode, RunStatus
from app.domain.services.parser_service import parse_program
from app.domain.services.prover_service import Prover
from app.schemas.run_schema import RunResult
from app.services.corpus_service import CorpusService, read_source
from app.services.run_service import RunService
from app.services.verification_service import VerificationService
from app.utils.logger import configure_logging


RECURSION_LIMIT = 20_000


def _choices(ctx, param, value: Optional[str]) -> Optional[list[int]]:
    if value is None:
        return None
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter("expected comma-separated integers")


def _echo_run(result: RunResult, trace: bool) -> None:
    if trace:
        for line in result.trace:
            click.echo(line)
    click.echo(f"status: {result.status.value}")
    if result.status is RunStatus.OK:
        store = ", ".join(f"{k}:{v}" for k, v in result.store.items())
        click.echo(f"s: {{{store}}}")
        click.echo(f"h: {{[{', '.join(result.heap)}]}}" if result.heap else "h: 0")
    elif result.reason:
        click.echo(f"reason: {result.reason}")
    click.echo(f"choices: {','.join(str(c) for c in result.choices)}")


@click.group()
@click.option("--log-level", default=None, help="Override FVF_LOGGING__LEVEL.")
def cli(log_level: Optional[str]) -> None:
    """Modular verifier for a small heap-manipulating language."""
    configure_logging(log_level or ("DEBUG" if settings.debug else settings.logging.level))
    sys.setrecursionlimit(max(sys.getrecursionlimit(), RECURSION_LIMIT))


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--trace", is_flag=True, help="Print every routine's step log.")
@click.option("--smtlib-dir", type=click.Path(file_okay=False, path_type=Path), default=None)
@handle_service_exceptions
def verify(file: Path, trace: bool, smtlib_dir: Optional[Path]) -> None:
    """Check every routine against its contract and main for failures."""
    program = parse_program(read_source(file))
    verdict = VerificationService(Prover(smtlib_dir=smtlib_dir)).verify(program, trace)
    if trace:
        for result in [*verdict.routines, verdict.main]:
            click.echo(f"== {result.name}")
            for line in result.log:
                click.echo(line)
    if verdict.verified:
        click.echo(f"verified: {len(verdict.routines)} routines, main ok")
        return
    for result in verdict.failures:
        click.echo(f"failed: {result.name}: {result.reason}")
        for line in result.trace:
            click.echo(f"  {line}")
    sys.exit(int(ExitCode.FAILED))


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--depth", type=click.IntRange(min=0), default=None)
@click.option("--choices", callback=_choices, default=None, help="Comma-separated integer choices.")
@click.option("--seed", type=int, default=None)
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--trace", is_flag=True)
@handle_service_exceptions
def run(
    file: Path,
    depth: Optional[int],
    choices: Optional[list[int]],
    seed: Optional[int],
    trials: Optional[int],
    trace: bool,
) -> None:
    """Run main concretely under scripted or seeded choices."""
    if choices is not None and (seed is not None or trials is not None):
        raise click.UsageError("--choices cannot be combined with --seed or --trials")
    program = parse_program(read_source(file))
    runner = RunService(depth)
    if trials is not None:
        summary = runner.run_trials(program, settings.corpus.seed if seed is None else seed, trials)
        for trial in summary.trials:
            click.echo(f"trial {trial.trial} seed {trial.seed}: {trial.result.status.value}")
        click.echo(
            f"summary: {summary.count(RunStatus.OK)} ok, {summary.count(RunStatus.BLOCKED)} blocked, "
            f"{summary.count(RunStatus.SCRIPT_EXHAUSTED)} exhausted, {summary.count(RunStatus.FAILED)} failed"
        )
        if summary.failures:
            sys.exit(int(ExitCode.FAILED))
        return
    if choices is None and seed is None:
        seed = settings.corpus.seed
    result = runner.run(program, choices=choices, seed=seed, trace=trace)
    _echo_run(result, trace)
    if result.failed:
        sys.exit(int(ExitCode.FAILED))


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--routine", "routine", required=True, help="Routine name, or main.")
@handle_service_exceptions
def trace(file: Path, routine: str) -> None:
    """Print the symbolic step log of one routine, every path included."""
    program = parse_program(read_source(file))
    result = VerificationService().trace_routine(program, routine)
    for line in result.log:
        click.echo(line)
    if not result.verified:
        sys.exit(int(ExitCode.FAILED))


@cli.command()
@click.option("--dir", "corpus_dir", type=click.Path(file_okay=False, path_type=Path), default=None)
@handle_service_exceptions
def corpus(corpus_dir: Optional[Path]) -> None:
    """Check every bundled program against its recorded expectations."""
    checks = CorpusService(corpus_dir).check_all()
    for check in checks:
        click.echo(f"{check.name}: {'ok' if check.passed else 'FAILED'}")
        for problem in check.problems:
            click.echo(f"  {problem}")
    if not all(check.passed for check in checks):
        sys.exit(int(ExitCode.FAILED))


if __name__ == "__main__":
    cli()
