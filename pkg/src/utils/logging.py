"""Logging setup shared by the CLI and the job API."""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from typing import Iterator

from src.config.settings import settings

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"


def configure_logging() -> None:
    """Configure application logging once."""
    root_logger = logging.getLogger()
    level = getattr(logging, settings.log_level.upper(), logging.INFO)
    root_logger.setLevel(level)

    if not root_logger.handlers:
        logging.basicConfig(level=level, format=LOG_FORMAT)


@contextmanager
def log_phase(logger: logging.Logger, phase: str, **sizes: int) -> Iterator[None]:
    """Log the wall time of a computation phase at debug level."""
    started = time.perf_counter()
    try:
        yield
    finally:
        detail = " ".join(f"{key}={value}" for key, value in sizes.items())
        logger.debug("%s took %.3fs %s", phase, time.perf_counter() - started, detail)
