from pathlib import Path

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent


class ProverSettings(BaseModel):
    max_case_splits: int = Field(8, ge=0)  # disjunctions split per query, the rest are dropped
    max_constraints: int = Field(512, ge=8)  # Fourier-Motzkin gives up past this
    memoize: bool = Field(True)
    cache_size: int = Field(4096, ge=0)


class ExecutionSettings(BaseModel):
    default_depth: int = Field(64, ge=0)
    min_value: int = Field(-100)
    max_value: int = Field(100)
    max_address: int = Field(1_000_000, ge=1)
    check_state_invariants: bool = Field(False)

    @field_validator("max_value")
    @classmethod
    def validate_value_range(cls, v: int, info) -> int:
        low = info.data.get("min_value", v)
        if v < low:
            raise ValueError(f"max_value {v} is below min_value {low}")
        return v


class CorpusSettings(BaseModel):
    corpus_dir: Path = Field(PROJECT_ROOT / "corpus")
    trials: int = Field(100, ge=1)
    depth: int = Field(64, ge=0)
    seed: int = Field(0)


class LoggingSettings(BaseModel):
    level: str = Field("WARNING")

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level: {v}")
        return level


class AppSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="FVF_",
        env_nested_delimiter="__",
        env_file=".env",
        extra="ignore",
    )

    debug: bool = Field(False)
    max_workers: int = Field(4, ge=1)
    prover: ProverSettings = Field(default_factory=ProverSettings)
    execution: ExecutionSettings = Field(default_factory=ExecutionSettings)
    corpus: CorpusSettings = Field(default_factory=CorpusSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)


settings: AppSettings = AppSettings()
