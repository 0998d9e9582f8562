# Copyright hweno-solver contributors. All Rights Reserved.

"""
Functionality for creating the logger of the benchmark command line.

Every record carries the run it belongs to as `problem/scheme@grid`, set by `run_context`
while a grid is being solved and "-" outside of one.
"""
from __future__ import annotations

import contextvars
import logging
import logging.handlers
import os
import sys
import tempfile
from contextlib import contextmanager
from typing import Any, Iterator, Sequence

DEBUG = logging.DEBUG
INFO = logging.INFO
WARNING = logging.WARNING
ERROR = logging.ERROR

LOG_DIR_ENV = "HWENO_LOG_DIR"
DEFAULT_LOG_DIR = "~/.hweno/logs"
NO_RUN = "-"

_current_run: contextvars.ContextVar[str] = contextvars.ContextVar("hweno_run", default=NO_RUN)


@contextmanager
def run_context(problem: str, scheme: str, shape: Sequence[int]) -> Iterator[str]:
    """Tags the records logged inside the block with the run being solved."""
    label = f"{problem}/{scheme}@{'x'.join(str(n) for n in shape)}"
    token = _current_run.set(label)
    try:
        yield label
    finally:
        _current_run.reset(token)


class RunContextFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        record.run = _current_run.get()
        return True


class SolverConsoleHandler(logging.Handler):
    """Warnings and errors go to stderr, progress to stdout."""

    def emit(self, record: Any) -> None:
        msg = self.format(record)
        stream = sys.stderr if record.levelno >= logging.WARNING else sys.stdout
        try:
            stream.write(msg + "\n")
            stream.flush()
        except Exception:  # pragma: no cover
            self.handleError(record)


def log_file_path() -> str:
    """
    The rotating log file, under $HWENO_LOG_DIR when set. Falls back to a temp file when the
    directory cannot be created or written.
    """
    log_dir = os.path.expanduser(os.environ.get(LOG_DIR_ENV, DEFAULT_LOG_DIR))
    fallback = os.path.join(tempfile.gettempdir(), f"hweno.{os.getpid()}.log")

    if not os.path.exists(log_dir):
        try:
            os.makedirs(log_dir)
        except (IOError, OSError):
            return fallback

    if not os.access(log_dir, os.W_OK | os.R_OK):
        return fallback
    return os.path.join(log_dir, "hweno.log")


CONSOLE_FORMAT = "%(levelname)7s [%(run)s] %(message)s"
DISK_FORMAT = "%(asctime)s %(levelname)7s [%(run)s] %(name)s.%(funcName)s: %(message)s"


class SolverLogger(logging.Logger):
    def __init__(self, name):
        super().__init__(name)
        run_filter = RunContextFilter()

        console_handler = SolverConsoleHandler()
        console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
        console_handler.addFilter(run_filter)
        self.addHandler(console_handler)

        disk_handler = logging.handlers.RotatingFileHandler(
            log_file_path(), maxBytes=10485760, backupCount=5
        )
        disk_handler.setFormatter(logging.Formatter(DISK_FORMAT))
        disk_handler.addFilter(run_filter)
        self.addHandler(disk_handler)

        self.propagate = False


def get_logger(name: str) -> logging.Logger:
    """
    Retrieves the specified logger, created as a SolverLogger on first use.
    """
    logging_class = logging.getLoggerClass()
    logging.setLoggerClass(SolverLogger)
    logger = logging.getLogger(name)
    logging.setLoggerClass(logging_class)

    return logger
