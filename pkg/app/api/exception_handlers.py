"""Exception handlers to translate domain exceptions to process exit codes."""

import functools
import sys

import click

from app.core.constants import ExitCode
from app.domain.exceptions import (
    CorpusEntryInvalid,
    DomainException,
    ExecutionException,
    InvalidProgram,
    ParseError,
    ProgramNotVerified,
    ResourceException,
    ScriptExhausted,
    SourceNotReadable,
    SyntaxException,
    UnknownRoutine,
    VerificationException,
)
from app.utils.logger import get_logger


logger = get_logger("exception_handlers")


class DomainExceptionHandler:
    """Centralized handler for domain exceptions."""

    # Mapping of domain exceptions to exit codes
    EXCEPTION_EXIT_MAP = {
        ParseError: ExitCode.STATIC_ERROR,
        InvalidProgram: ExitCode.STATIC_ERROR,
        UnknownRoutine: ExitCode.STATIC_ERROR,
        SourceNotReadable: ExitCode.STATIC_ERROR,
        CorpusEntryInvalid: ExitCode.STATIC_ERROR,
        ProgramNotVerified: ExitCode.FAILED,
        ScriptExhausted: ExitCode.FAILED,
    }

    # Base exception type exit codes
    BASE_EXCEPTION_EXIT_MAP = {
        SyntaxException: ExitCode.STATIC_ERROR,
        VerificationException: ExitCode.FAILED,
        ResourceException: ExitCode.STATIC_ERROR,
        ExecutionException: ExitCode.INTERNAL_ERROR,
    }

    @classmethod
    def exit_code(cls, exc: DomainException) -> ExitCode:
        code = cls.EXCEPTION_EXIT_MAP.get(type(exc))
        if code is None:
            for base_type, base_code in cls.BASE_EXCEPTION_EXIT_MAP.items():
                if isinstance(exc, base_type):
                    code = base_code
                    break
        return code if code is not None else ExitCode.INTERNAL_ERROR

    @classmethod
    def describe(cls, exc: DomainException) -> list[str]:
        """Diagnostic lines for stderr."""
        if isinstance(exc, InvalidProgram):
            return [f"error[{exc.error_code}]: {error}" for error in exc.errors]
        return [f"error[{exc.error_code}]: {exc.message}"]


def handle_service_exceptions(fn):
    """Turn domain exceptions raised by a command into stderr diagnostics and an exit code."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DomainException as exc:
            for line in DomainExceptionHandler.describe(exc):
                click.echo(line, err=True)
            code = DomainExceptionHandler.exit_code(exc)
            logger.debug(f"{type(exc).__name__} mapped to exit code {int(code)}")
            sys.exit(int(code))

    return wrapper
