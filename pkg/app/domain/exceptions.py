"""Domain exceptions for parsing, execution and verification."""

from dataclasses import dataclass
from typing import Iterable, Optional


class DomainException(Exception):
    """Base exception for all domain-related errors."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        self.message = message
        self.error_code = error_code
        super().__init__(message)


# Syntax Exceptions
class SyntaxException(DomainException):
    """Base exception for source text that cannot become a program."""


class ParseError(SyntaxException):
    """Lexical or syntactic error with a source position."""

    def __init__(
        self,
        message: str,
        line: int,
        column: int,
        expected: Iterable[str] = (),
    ):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        detail = f"{line}:{column}: {message}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail, "PARSE_ERROR")


@dataclass(frozen=True)
class StaticError:
    """One well-formedness violation."""

    kind: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None

    def __str__(self) -> str:
        if self.line is None:
            return f"{self.kind}: {self.message}"
        return f"{self.line}:{self.column}: {self.kind}: {self.message}"


class InvalidProgram(SyntaxException):
    """The program parsed but violates static well-formedness."""

    def __init__(self, errors: Iterable[StaticError]):
        self.errors = tuple(errors)
        super().__init__(
            "; ".join(str(e) for e in self.errors) or "invalid program",
            "INVALID_PROGRAM",
        )


# Execution Exceptions
class ExecutionException(DomainException):
    """Base exception for misuse of outcomes and executors."""


class NonFinitaryOutcome(ExecutionException):
    """A predicate was asked of an outcome with an infinite choice node."""

    def __init__(self, index_domain: str):
        super().__init__(
            f"satisfaction is only decided on finitary outcomes, found a {index_domain} node",
            "NON_FINITARY",
        )


class ScriptExhausted(ExecutionException):
    """A choice script ran out under the fail-test policy."""

    def __init__(self, consumed: int, label: str):
        self.consumed = consumed
        self.label = label
        super().__init__(
            f"choice script exhausted after {consumed} values (needed a {label})",
            "SCRIPT_EXHAUSTED",
        )


class StateInvariantViolation(ExecutionException):
    """A symbolic state mentions a symbol its path condition does not declare."""

    def __init__(self, where: str, symbols: Iterable[str]):
        super().__init__(
            f"undeclared symbols {sorted(symbols)} after {where}",
            "STATE_INVARIANT",
        )


# Verification Exceptions
class VerificationException(DomainException):
    """Base exception for verification requests that cannot proceed."""


class UnknownRoutine(VerificationException):
    """Routine not declared by the program."""

    def __init__(self, name: str):
        super().__init__(f"Unknown routine: {name}", "UNKNOWN_ROUTINE")


class ProgramNotVerified(VerificationException):
    """Differential replay requires a symbolically verified program."""

    def __init__(self, reason: str):
        super().__init__(f"Program does not verify: {reason}", "NOT_VERIFIED")


# Resource Exceptions
class ResourceException(DomainException):
    """Base exception for files the tool reads."""


class SourceNotReadable(ResourceException):
    """A source or corpus file could not be read."""

    def __init__(self, path: str, reason: str):
        super().__init__(f"Cannot read {path}: {reason}", "SOURCE_NOT_READABLE")


class CorpusEntryInvalid(ResourceException):
    """A corpus header line is malformed."""

    def __init__(self, path: str, detail: str):
        super().__init__(f"{path}: {detail}", "CORPUS_ENTRY_INVALID")
