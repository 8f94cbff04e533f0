"""Logging configuration and utilities."""

import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

from loguru import logger

from funceq.config.settings import settings_instance as settings
from funceq.utils.helpers import format_duration

NO_COMMAND = "-"


def setup_logging(
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    log_format: Optional[str] = None,
) -> None:
    """Route log records to stderr and, when configured, a rotating file.

    Stdout carries the JSON report, so no sink is ever attached to it. Every
    record carries ``extra["command"]``; it reads ``-`` outside
    :func:`command_context`.

    Args:
        log_level: Logging level (defaults to settings.log_level)
        log_file: Log file path (defaults to settings.log_file)
        log_format: Log format (defaults to settings.log_format)
    """
    log_level = log_level or settings.log_level
    log_file = log_file or settings.log_file
    log_format = log_format or settings.log_format

    logger.remove()
    logger.configure(extra={"command": NO_COMMAND})

    logger.add(
        sys.stderr,
        level=log_level,
        format=log_format,
        colorize=True,
        backtrace=True,
        diagnose=False,
    )

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            log_file,
            level=log_level,
            format=log_format,
            rotation=settings.log_max_size,
            retention=settings.log_backup_count,
            compression="zip",
            backtrace=True,
            diagnose=False,
        )

    logger.debug(f"Logging initialized - Level: {log_level}, File: {log_file}")


@contextmanager
def command_context(command: str) -> Iterator[None]:
    """Tag every record logged inside the block with the CLI command."""
    with logger.contextualize(command=command):
        yield


class Stopwatch:
    """Elapsed wall time of a :func:`timed` block, readable once the block exits."""

    def __init__(self) -> None:
        self.started = time.perf_counter()
        self.seconds = 0.0


@contextmanager
def timed(label: Optional[str] = None) -> Iterator[Stopwatch]:
    """Time a block; with a label, log the duration at TRACE level.

    Example:
        >>> with timed("grid iteration") as watch:
        ...     run()
        >>> watch.seconds
    """
    watch = Stopwatch()
    try:
        yield watch
    finally:
        watch.seconds = time.perf_counter() - watch.started
        if label:
            logger.trace(f"{label}: {format_duration(watch.seconds)}")


class LoggerMixin:
    """Gives a class a ``logger`` bound to its class name."""

    @property
    def logger(self):
        """Loguru logger with ``component`` set to the class name.

        Returns:
            A bound logger; records also carry the current command.
        """
        return logger.bind(component=self.__class__.__name__)


setup_logging()
