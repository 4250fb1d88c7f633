from pathlib import Path

import pytest
import structlog
from click.testing import CliRunner

from src.algebra.scalars import FieldContext, cyclotomic_context
from src.arrangements.arrangement import Arrangement, parse_arrangement

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / f"{name}.json")


def load_fixture(name: str) -> Arrangement:
    path = FIXTURES / f"{name}.json"
    return parse_arrangement(path.read_text(encoding="utf-8"), source=str(path))


@pytest.fixture(autouse=True)
def _reset_logging():
    yield
    # CLI runs bind structlog to the runner's stderr
    structlog.reset_defaults()


@pytest.fixture
def rationals() -> FieldContext:
    return cyclotomic_context(1)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()
