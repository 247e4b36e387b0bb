import os
import sys
from pathlib import Path
from typing import Callable

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from app.core.config import settings
from app.domain.services.parser_service import parse_program
from app.domain.services.prover_service import Prover
from app.models.syntax_model import Program
from app.services.corpus_service import read_source
from app.utils.cache import cache


# Outcome trees are built and walked recursively.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))

CORPUS_DIR = Path(__file__).resolve().parent.parent.parent / "corpus"

hypothesis_settings.register_profile("fvf", deadline=None, suppress_health_check=[HealthCheck.too_slow])
hypothesis_settings.register_profile("thorough", parent=hypothesis_settings.get_profile("fvf"), max_examples=1000)
hypothesis_settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fvf"))


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    """Directory of the bundled example programs."""
    return CORPUS_DIR


@pytest.fixture(scope="session")
def load_program(corpus_dir: Path) -> Callable[[str], Program]:
    """Parse a corpus program by name."""

    def load(name: str) -> Program:
        return parse_program(read_source(corpus_dir / f"{name}.fvf"))

    return load


@pytest.fixture
def prover() -> Prover:
    """A prover with the default limits and its own query counter."""
    return Prover(settings.prover)


@pytest.fixture(autouse=True)
def clean_cache():
    """Start every test with an empty entailment memo."""
    cache.invalidate()
    yield
