from enum import Enum, IntEnum


RESULT_VAR = "result"

POINTS_TO = "|->"
MALLOC_BLOCK = "mb"
BUILTIN_PREDICATES = {POINTS_TO: 2, MALLOC_BLOCK: 2}

KEYWORDS = frozenset(
    {
        "predicate",
        "routine",
        "req",
        "ens",
        "if",
        "then",
        "else",
        "while",
        "inv",
        "do",
        "malloc",
        "free",
        "open",
        "close",
        "skip",
        "message",
    }
)


class ExitCode(IntEnum):
    OK = 0
    FAILED = 1
    STATIC_ERROR = 2
    INTERNAL_ERROR = 70


class ChoiceLabel(str, Enum):
    ADDRESS = "address"
    VALUE = "value"
    PARAM = "param"
    PATTERN = "pattern"
    HAVOC = "havoc"
    DEPTH = "depth"
    RESULT = "result"
    BRANCH = "branch"


class RunStatus(str, Enum):
    OK = "ok"
    FAILED = "failed"
    BLOCKED = "blocked"
    SCRIPT_EXHAUSTED = "script-exhausted"
