from typing import Literal, Optional

from pydantic import BaseModel, Field


class RoutineResult(BaseModel):
    name: str
    verified: bool
    reason: Optional[str] = None
    trace: list[str] = Field(default_factory=list)
    log: list[str] = Field(default_factory=list)


class Verdict(BaseModel):
    status: Literal["verified", "failed"]
    routines: list[RoutineResult] = Field(default_factory=list)
    main: RoutineResult
    elapsed_ms: float = Field(0.0, ge=0)
    queries: int = Field(0, ge=0)

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    @property
    def failures(self) -> list[RoutineResult]:
        return [r for r in [*self.routines, self.main] if not r.verified]
