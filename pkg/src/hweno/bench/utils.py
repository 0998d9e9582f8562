# Copyright hweno-solver contributors. All Rights Reserved.

"""
Minor utility functions
"""
from __future__ import annotations

import logging
import os
import time
from functools import wraps
from typing import Any, Callable, Iterable, Sequence, Tuple

import numpy as np

_logger = logging.getLogger(__name__)

CSV_FORMAT = "%.17g"


def timed_func(func: Callable) -> Callable[..., Tuple[Any, float]]:
    """Decorator that makes a function return (result, elapsed seconds) and logs the time"""

    @wraps(func)
    def wrapped(*args, **kwargs):
        start = time.perf_counter()
        result = func(*args, **kwargs)
        elapsed = time.perf_counter() - start
        _logger.info(f"func: {func.__name__} took {elapsed:.3f} seconds")
        return result, elapsed

    return wrapped


def write_csv(path: str, header: Sequence[str], columns: Iterable[np.ndarray]) -> str:
    """Writes equal-length columns with a header row, 17 significant digits per value."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    table = np.column_stack([np.ravel(c) for c in columns])
    np.savetxt(path, table, fmt=CSV_FORMAT, delimiter=",", header=",".join(header), comments="")
    return path


def read_csv(path: str) -> Tuple[Tuple[str, ...], np.ndarray]:
    """Header names and the (rows, columns) table of a file written by write_csv."""
    with open(path, encoding="utf8") as fh:
        header = tuple(fh.readline().strip().split(","))
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, table
