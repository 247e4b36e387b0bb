from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from app.core.constants import RunStatus


class RunResult(BaseModel):
    model_config = ConfigDict(use_enum_values=False)

    status: RunStatus
    store: dict[str, int] = Field(default_factory=dict)
    heap: list[str] = Field(default_factory=list)
    trace: list[str] = Field(default_factory=list)
    reason: Optional[str] = None
    choices: list[int] = Field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.status is RunStatus.FAILED


class TrialResult(BaseModel):
    trial: int = Field(..., ge=0)
    seed: str
    result: RunResult


class TrialSummary(BaseModel):
    trials: list[TrialResult] = Field(default_factory=list)

    def count(self, status: RunStatus) -> int:
        return sum(1 for t in self.trials if t.result.status is status)

    @property
    def failures(self) -> list[TrialResult]:
        return [t for t in self.trials if t.result.failed]
