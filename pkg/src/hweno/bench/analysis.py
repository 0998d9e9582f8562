# Copyright hweno-solver contributors. All Rights Reserved.

"""
Error norms, convergence orders, comparison against cached reference solutions and the
tables written after convergence studies.
"""
from __future__ import annotations

import glob
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..scheme.core import Grid, Grid1D
from ..scheme.systems import InadmissibleStateError
from .problems import Problem
from .utils import read_csv, write_csv

_logger = logging.getLogger(__name__)

ReferenceGenerator = Callable[[Problem, int], np.ndarray]
"""Produces the interior conserved field (ncomp, nx) of a reference run."""


class MissingReferenceError(FileNotFoundError):
    """Error that is raised when a reference solution is not cached and may not be generated"""

    pass


@dataclass
class GridResult:
    nx: int
    ny: Optional[int] = None
    l1: float = math.nan
    linf: float = math.nan
    seconds: float = 0.0
    steps: int = 0
    healthy: bool = True
    error_source: str = "none"
    """'exact', 'reference', 'reference-nearest' (incommensurate grids) or 'none'."""


@dataclass
class RunReport:
    problem: str
    scheme: str
    results: List[GridResult] = field(default_factory=list)

    @property
    def grids(self) -> List[int]:
        return [r.nx for r in self.results]

    def orders(self) -> List[Tuple[float, float]]:
        """(L1, Linf) order per consecutive pair; NaN where not defined."""
        pairs = []
        for coarse, fine in zip(self.results, self.results[1:]):
            if fine.nx != 2 * coarse.nx:
                pairs.append((math.nan, math.nan))
                continue
            pairs.append((_safe_order(coarse.l1, fine.l1), _safe_order(coarse.linf, fine.linf)))
        return pairs


def _safe_order(coarse: float, fine: float) -> float:
    if not (coarse > 0 and fine > 0 and math.isfinite(coarse) and math.isfinite(fine)):
        return math.nan
    return math.log2(coarse / fine)


def error_norms(numeric: np.ndarray, exact: np.ndarray) -> Tuple[float, float]:
    """
    Mean absolute error and maximum error between two fields.

    Raises:
        ValueError: If the fields do not have the same extents.
    """
    numeric = np.asarray(numeric, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if numeric.shape != exact.shape:
        raise ValueError(f"Field extents differ: {numeric.shape} vs {exact.shape}")
    error = np.abs(numeric - exact)
    return float(np.mean(error)), float(np.max(error))


def convergence_order(errors: Sequence[float], grids: Sequence[int]) -> List[float]:
    """
    order_k = log2(e_{k-1} / e_k) for grids that double successively.

    Raises:
        ValueError: On nonpositive errors, mismatched lengths or grids that do not double.
    """
    if len(errors) != len(grids):
        raise ValueError(f"{len(errors)} errors for {len(grids)} grids")
    if any(not e > 0 for e in errors):
        raise ValueError(f"Errors must be positive to compute orders, got {list(errors)}")
    for coarse, fine in zip(grids, grids[1:]):
        if fine != 2 * coarse:
            raise ValueError(f"Grids must double successively, got {list(grids)}")
    return [math.log2(a / b) for a, b in zip(errors, errors[1:])]


def health_check(u: np.ndarray, problem: Problem) -> Tuple[bool, str]:
    """NaN scan plus density and pressure positivity for Euler problems."""
    if not np.all(np.isfinite(u)):
        return False, "non-finite values in the solution"
    if problem.euler:
        try:
            problem.law.check_admissible(u)
        except InadmissibleStateError as e:
            return False, str(e)
    return True, "ok"


# Reference solutions


def reference_path(out_dir: str, problem: str, nx: int) -> str:
    return os.path.join(out_dir, "refs", f"{problem}-{nx}.csv")


def list_references(out_dir: str) -> List[str]:
    return sorted(glob.glob(os.path.join(out_dir, "refs", "*.csv")))


def write_reference(
    path: str, grid: Grid1D, field_values: np.ndarray, names: Sequence[str]
) -> str:
    return write_csv(path, ["x", *names], [grid.centers, *field_values])


def load_reference(
    problem: Problem,
    out_dir: str,
    generate: Optional[ReferenceGenerator] = None,
    force: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    (x, field) of the reference solution, read from the cache or generated and cached.

    Raises:
        MissingReferenceError: If the problem has no reference recipe, or the cache misses and
            no generator was given.
    """
    if problem.reference_nx is None:
        raise MissingReferenceError(f"Problem '{problem.name}' has no reference recipe")
    path = reference_path(out_dir, problem.name, problem.reference_nx)
    if force or not os.path.exists(path):
        if generate is None:
            raise MissingReferenceError(
                f"Reference {path} is not cached and generation is disabled. "
                f"Run 'hweno reference --problem {problem.name}' first."
            )
        _logger.info(f"Generating reference solution {path}")
        grid = problem.make_grid(problem.reference_nx)
        assert isinstance(grid, Grid1D)
        values = generate(problem, problem.reference_nx)
        write_reference(path, grid, values, problem.law.component_names)
    header, table = read_csv(path)
    _logger.debug(f"Loaded reference {path} with columns {header}")
    return table[:, 0], table[:, 1:].T


@dataclass(frozen=True)
class ReferenceComparison:
    l1: float
    linf: float
    nearest_node: bool
    path: str


def restrict(reference: np.ndarray, reference_nx: int, grid: Grid1D) -> Tuple[np.ndarray, bool]:
    """
    Reference values at the coarse cell centers. When the refinement ratio is an odd integer
    every coarse center is a fine center; otherwise the nearest fine center is taken and the
    second return value is True.
    """
    ratio = reference_nx / grid.nx
    if ratio == int(ratio) and int(ratio) % 2 == 1:
        r = int(ratio)
        return reference[..., (r - 1) // 2 :: r], False
    fine_dx = grid.length / reference_nx
    # A coarse center on a fine face takes the fine cell to its right.
    index = np.floor((grid.centers - grid.x_min) / fine_dx + 1e-9).astype(int)
    return reference[..., np.clip(index, 0, reference_nx - 1)], True


def compare_to_reference(
    numeric: np.ndarray,
    grid: Grid,
    problem: Problem,
    out_dir: str,
    generate: Optional[ReferenceGenerator] = None,
) -> ReferenceComparison:
    """
    Error norms of component 0 against the cached reference run of the problem.

    Raises:
        MissingReferenceError: If the reference is not cached and no generator was given.
    """
    if not isinstance(grid, Grid1D):
        raise MissingReferenceError("Reference solutions are only kept for 1D problems")
    _, reference = load_reference(problem, out_dir, generate)
    assert problem.reference_nx is not None
    sampled, nearest = restrict(reference, problem.reference_nx, grid)
    if nearest:
        _logger.info(
            f"{problem.name}: reference N={problem.reference_nx} sampled at nearest nodes "
            f"for N={grid.nx}"
        )
    l1, linf = error_norms(np.atleast_2d(numeric)[0], sampled[0])
    return ReferenceComparison(
        l1, linf, nearest, reference_path(out_dir, problem.name, problem.reference_nx)
    )


# Tables


TABLE_HEADER = ("N", "L1", "order", "Linf", "order")


def table_rows(report: RunReport) -> List[Tuple[str, ...]]:
    orders = [(math.nan, math.nan)] + report.orders()
    rows = []
    for result, (l1_order, linf_order) in zip(report.results, orders):
        size = str(result.nx) if result.ny is None else f"{result.nx}x{result.ny}"
        rows.append(
            (
                size,
                f"{result.l1:.2E}",
                "" if math.isnan(l1_order) else f"{l1_order:.2f}",
                f"{result.linf:.2E}",
                "" if math.isnan(linf_order) else f"{linf_order:.2f}",
            )
        )
    return rows


def format_table(report: RunReport) -> str:
    """Aligned text table: N, L1, order, Linf, order."""
    single = len(report.results) < 2
    header = TABLE_HEADER[::2] if single else TABLE_HEADER
    rows = [row[::2] if single else row for row in table_rows(report)]
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    lines = [f"{report.problem} ({report.scheme})"]
    lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    lines.extend("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in rows)
    return "\n".join(lines)


def write_tables(reports: Sequence[RunReport], out_dir: str) -> List[str]:
    """
    convergence.csv (scheme, N, L1, order, Linf, order), convergence.txt and efficiency.csv
    (scheme, N, L1, seconds) under `out_dir`.
    """
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "convergence.csv")
    txt_path = os.path.join(out_dir, "convergence.txt")
    eff_path = os.path.join(out_dir, "efficiency.csv")
    with open(csv_path, "w", encoding="utf8") as fh:
        fh.write("problem,scheme,N,L1,L1_order,Linf,Linf_order\n")
        for report in reports:
            orders = [(math.nan, math.nan)] + report.orders()
            for result, (l1_order, linf_order) in zip(report.results, orders):
                fh.write(
                    f"{report.problem},{report.scheme},{result.nx},{result.l1:.17g},"
                    f"{l1_order:.17g},{result.linf:.17g},{linf_order:.17g}\n"
                )
    with open(txt_path, "w", encoding="utf8") as fh:
        fh.write("\n\n".join(format_table(r) for r in reports) + "\n")
    with open(eff_path, "w", encoding="utf8") as fh:
        fh.write("scheme,N,L1,seconds\n")
        for report in reports:
            for result in report.results:
                fh.write(f"{report.scheme},{result.nx},{result.l1:.17g},{result.seconds:.17g}\n")
    return [csv_path, txt_path, eff_path]


def write_report_row(report: RunReport, path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf8") as fh:
        fh.write("problem,scheme,nx,ny,L1,Linf,error_source,seconds,steps,healthy\n")
        for r in report.results:
            fh.write(
                f"{report.problem},{report.scheme},{r.nx},{'' if r.ny is None else r.ny},"
                f"{r.l1:.17g},{r.linf:.17g},{r.error_source},{r.seconds:.17g},{r.steps},"
                f"{str(r.healthy).lower()}\n"
            )
    return path
