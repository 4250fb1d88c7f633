import json

import pytest

from src.common.errors import InternalError, NotEssentialError, ParseError
from src.common.logging import configure_logging
from src.common.settings import Settings, load_settings


def test_defaults_when_file_missing(tmp_path):
    assert load_settings(tmp_path / "missing.json") == Settings()


def test_load_from_file(tmp_path):
    path = tmp_path / "arrlab.json"
    path.write_text(json.dumps({"rank": {"strategy": "modular", "primes": 3}, "batch": {"jobs": 0}}))
    settings = load_settings(path)
    assert settings.rank.strategy == "modular"
    assert settings.rank.primes == 3
    assert settings.rank.exact_cutoff == 64
    assert settings.batch.jobs == 1


def test_config_path_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "env.json"
    path.write_text(json.dumps({"logging": {"level": "DEBUG"}}))
    monkeypatch.setenv("ARRLAB_CONFIG", str(path))
    assert load_settings().log_level == "DEBUG"


@pytest.mark.parametrize("rank", [{"strategy": "guess"}, {"primes": 1}])
def test_invalid_rank_settings(tmp_path, rank):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"rank": rank}))
    with pytest.raises(ValueError):
        load_settings(path)


def test_shipped_config_loads():
    settings = load_settings()
    assert settings.rank.strategy == "auto"
    assert settings.catalog.max_attempts == 5


def test_configure_logging(monkeypatch):
    monkeypatch.delenv("LOG_LEVEL", raising=False)
    assert configure_logging("debug") == "DEBUG"
    assert configure_logging(None, default="error") == "ERROR"
    assert configure_logging("loud") == "WARNING"
    monkeypatch.setenv("LOG_LEVEL", "INFO")
    assert configure_logging(None) == "INFO"


def test_error_payloads():
    error = ParseError("bad literal", line=3)
    assert error.to_dict() == {"code": "PARSE_ERROR", "message": "bad literal", "context": {"line": "3"}}
    assert NotEssentialError("pencil").exit_code == 3
    assert InternalError("bug").to_dict() == {"code": "INTERNAL_ERROR", "message": "bug"}
