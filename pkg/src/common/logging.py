"""structlog setup for the command line entry points."""

from __future__ import annotations

import os
import sys

import structlog

_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def configure_logging(level: str | None = None, default: str = "WARNING") -> str:
    """Configure structlog once; log lines go to stderr, stdout stays JSON."""
    level_name = (level or os.getenv("LOG_LEVEL") or default).upper()
    if level_name not in _LEVELS:
        level_name = default.upper()
    structlog.configure(
        wrapper_class=structlog.make_filtering_bound_logger(level_name),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
    return level_name
