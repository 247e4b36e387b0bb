from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from app.core.constants import RunStatus


class RunExpectation(BaseModel):
    depth: int = Field(..., ge=0)
    choices: Optional[list[int]] = None
    seed: Optional[int] = None
    status: RunStatus

    @model_validator(mode="after")
    def validate_source(self) -> "RunExpectation":
        if (self.choices is None) == (self.seed is None):
            raise ValueError("exactly one of choices and seed is required")
        return self


class CorpusEntry(BaseModel):
    name: str
    path: Path
    source: str
    provenance: str = "invented"
    expect_verify: int = Field(0, ge=0, le=2)
    expect_failure: Optional[str] = None
    runs: list[RunExpectation] = Field(default_factory=list)
    differential: bool = False


class CorpusCheck(BaseModel):
    name: str
    problems: list[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.problems


class FailureReport(BaseModel):
    trial: int
    seed: str
    reason: Optional[str] = None
    choices: list[int] = Field(default_factory=list)
    trace: list[str] = Field(default_factory=list)


class DifferentialReport(BaseModel):
    trials: int = Field(..., ge=0)
    ok: int = 0
    blocked: int = 0
    exhausted: int = 0
    failures: list[FailureReport] = Field(default_factory=list)

    @property
    def sound(self) -> bool:
        return not self.failures
