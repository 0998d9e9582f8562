# Copyright hweno-solver contributors. All Rights Reserved.

from .__main__ import main
from .runner import BenchmarkRunner, convergence, run

__all__ = [
    "BenchmarkRunner",
    "convergence",
    "main",
    "run",
]
