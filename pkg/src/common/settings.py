"""Settings loaded from config/arrlab.json (path overridable via ARRLAB_CONFIG)."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

import structlog

logger = structlog.get_logger()

DEFAULT_CONFIG = Path(__file__).resolve().parents[2] / "config" / "arrlab.json"
RANK_STRATEGIES = ("auto", "modular", "exact")


@dataclass(frozen=True)
class RankSettings:
    strategy: str = "auto"
    primes: int = 2
    exact_cutoff: int = 64


@dataclass(frozen=True)
class CatalogSettings:
    max_attempts: int = 5


@dataclass(frozen=True)
class BatchSettings:
    jobs: int = 1


@dataclass(frozen=True)
class Settings:
    rank: RankSettings = field(default_factory=RankSettings)
    catalog: CatalogSettings = field(default_factory=CatalogSettings)
    batch: BatchSettings = field(default_factory=BatchSettings)
    log_level: str = "WARNING"


def _from_dict(data: Dict[str, Any]) -> Settings:
    rank = data.get("rank", {})
    strategy = rank.get("strategy", "auto")
    if strategy not in RANK_STRATEGIES:
        raise ValueError(f"unknown rank strategy {strategy!r}")
    primes = int(rank.get("primes", 2))
    if primes < 2:
        raise ValueError("rank.primes must be at least 2")
    return Settings(
        rank=RankSettings(strategy=strategy, primes=primes, exact_cutoff=int(rank.get("exact_cutoff", 64))),
        catalog=CatalogSettings(max_attempts=int(data.get("catalog", {}).get("max_attempts", 5))),
        batch=BatchSettings(jobs=max(1, int(data.get("batch", {}).get("jobs", 1)))),
        log_level=str(data.get("logging", {}).get("level", "WARNING")),
    )


def load_settings(config_path: str | os.PathLike[str] | None = None) -> Settings:
    path = Path(config_path or os.getenv("ARRLAB_CONFIG") or DEFAULT_CONFIG)
    if not path.exists():
        logger.debug("settings_defaults", path=str(path))
        return Settings()
    with open(path) as f:
        data = json.load(f)
    settings = _from_dict(data)
    logger.debug("loaded_settings", path=str(path), strategy=settings.rank.strategy)
    return settings


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
