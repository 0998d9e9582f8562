# Copyright hweno-solver contributors. All Rights Reserved.

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from ..scheme.core import (
    Grid,
    Grid1D,
    Grid2D,
    HermiteState,
    SchemeConfig,
    SchemeName,
    TimeStepMode,
    compute_dt,
    interior,
    wave_speeds,
)
from ..scheme.solver import fill_ghosts, rk3_step
from .analysis import (
    GridResult,
    RunReport,
    compare_to_reference,
    error_norms,
    health_check,
    load_reference,
    reference_path,
    write_report_row,
    write_tables,
)
from .data_classes import RunConfig
from .logging import run_context
from .problems import Problem, make_problem
from .utils import timed_func, write_csv

_logger = logging.getLogger(__name__)

PROGRESS_EVERY = 100


@dataclass
class SolveResult:
    state: HermiteState
    grid: Grid
    t: float
    steps: int


def uses_accuracy_steps(problem: Problem, config: SchemeConfig) -> bool:
    if config.time_step == TimeStepMode.AUTO:
        return problem.smooth
    return config.time_step == TimeStepMode.ACCURACY


def solve(problem: Problem, grid: Grid, config: SchemeConfig) -> SolveResult:
    """
    Integrates the problem from its initial data to its final time.

    Raises:
        NonFiniteStateError: If a field turns NaN or Inf.
        InadmissibleStateError: If an Euler state loses positivity where it is needed.
    """
    accuracy = uses_accuracy_steps(problem, config)
    state = problem.initial_state(grid)
    t = 0.0
    steps = 0
    end = problem.final_time * (1.0 - 1e-14)
    while t < end:
        fill_ghosts(state, grid, problem, t)
        alphas = wave_speeds(state, problem)
        dt = compute_dt(state, grid, config.cfl, problem, t, accuracy)
        state = rk3_step(state, dt, grid, problem, config, t=t, alphas=alphas)
        t += dt
        steps += 1
        if steps % PROGRESS_EVERY == 0:
            _logger.debug(f"{problem.name}: step {steps}, t={t:.6g}, dt={dt:.3e}")
    _logger.info(f"{problem.name}: reached t={t:.6g} in {steps} steps on {grid.shape}")
    return SolveResult(state, grid, t, steps)


timed_solve = timed_func(solve)


def generate_reference(problem: Problem, nx: int) -> np.ndarray:
    """The WENO-JS solution on nx points that serves as the reference of a problem."""
    result = solve(problem, problem.make_grid(nx), SchemeConfig(scheme=SchemeName.WENO_JS))
    return interior(result.state.u).copy()


def _errors(
    u: np.ndarray, grid: Grid, problem: Problem, out_dir: str, t: float
) -> tuple[float, float, str]:
    if problem.exact is not None:
        l1, linf = error_norms(u[0], problem.exact(grid, t)[0])
        return l1, linf, "exact"
    if problem.reference_nx is not None:
        comparison = compare_to_reference(u, grid, problem, out_dir, generate_reference)
        return comparison.l1, comparison.linf, (
            "reference-nearest" if comparison.nearest_node else "reference"
        )
    return math.nan, math.nan, "none"


def measure(problem: Problem, grid: Grid, config: SchemeConfig, out_dir: str):
    """Solves on one grid and returns (GridResult, SolveResult)."""
    with run_context(problem.name, config.scheme.value, grid.shape):
        return _measure(problem, grid, config, out_dir)


def _measure(problem: Problem, grid: Grid, config: SchemeConfig, out_dir: str):
    result, seconds = timed_solve(problem, grid, config)
    u = interior(result.state.u)
    healthy, message = health_check(u, problem)
    if healthy:
        l1, linf, source = _errors(u, grid, problem, out_dir, result.t)
    else:
        _logger.error(f"Unhealthy solution: {message}")
        l1, linf, source = math.nan, math.nan, "none"
    ny = grid.ny if isinstance(grid, Grid2D) else None
    gr = GridResult(grid.shape[0], ny, l1, linf, seconds, result.steps, healthy, source)
    _logger.info(f"L1={l1:.3e} Linf={linf:.3e} ({source}), {result.steps} steps in {seconds:.2f}s")
    return gr, result


def write_solution(
    result: SolveResult, problem: Problem, path: str, with_derivatives: bool = False
) -> List[str]:
    """
    Solution CSV at the final time: coordinates then one column per component (and the
    derivative fields when asked). 2D square grids also get the diagonal cut x = y.
    """
    grid = result.grid
    names = list(problem.law.component_names)
    fields = [("", result.state.u)]
    if with_derivatives:
        fields += [(f"{n}_", a) for n, a in result.state.fields()[1:]]
    header: List[str] = []
    columns: List[np.ndarray] = []
    if isinstance(grid, Grid1D):
        header.append("x")
        columns.append(grid.centers)
    else:
        x, y = grid.mesh()
        header += ["x", "y"]
        columns += [x, y]
    for prefix, arr in fields:
        header += [f"{prefix}{n}" for n in names]
        columns += list(interior(arr))
    written = [write_csv(path, header, columns)]

    if isinstance(grid, Grid2D) and grid.nx == grid.ny:
        cut_path = os.path.splitext(path)[0] + ".cut.csv"
        diagonal = np.arange(grid.nx)
        u = interior(result.state.u)[:, diagonal, diagonal]
        written.append(write_csv(cut_path, ["x", *names], [grid.x.centers, *u]))
    return written


class BenchmarkRunner:
    """
    Runs one configured benchmark: on_start validates the configuration and prepares the
    output directory, on_run solves, measures and writes the outputs.
    """

    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self.problem: Optional[Problem] = None
        self.scheme_config: Optional[SchemeConfig] = None

    def on_start(self) -> None:
        """
        Raises:
            RunConfigError: When the configuration is not valid.
            UnknownProblemError: When the problem name is not registered.
        """
        self.config.validate()
        self.scheme_config = self.config.scheme_config()
        self.problem = make_problem(self.config.problem)
        os.makedirs(self.config.out_dir, exist_ok=True)
        self.config.save(os.path.join(self.config.out_dir, self._stem() + ".cfg"))

    def _stem(self, nx: Optional[int] = None) -> str:
        assert self.problem is not None
        nx = nx or self.config.nx or self.problem.default_nx
        return f"{self.config.problem}-{self.config.scheme}-{nx}"

    def on_run(self) -> RunReport:
        if self.problem is None or self.scheme_config is None:
            self.on_start()
        assert self.problem is not None and self.scheme_config is not None
        grid = self.problem.make_grid(self.config.nx, self.config.ny)
        result, solved = measure(self.problem, grid, self.scheme_config, self.config.out_dir)
        report = RunReport(self.problem.name, self.scheme_config.scheme.value, [result])

        stem = os.path.join(self.config.out_dir, self._stem(grid.shape[0]))
        write_solution(solved, self.problem, stem + ".csv", self.config.emit_fields)
        write_report_row(report, stem + ".report.csv")
        return report


def run(config: RunConfig) -> RunReport:
    runner = BenchmarkRunner(config)
    runner.on_start()
    return runner.on_run()


def convergence(
    config: RunConfig, grids: Sequence[int], schemes: Optional[Sequence[str]] = None
) -> List[RunReport]:
    """
    One report per scheme over the given grid sizes (square grids in 2D), written as
    convergence.csv, convergence.txt and efficiency.csv under the output directory.
    """
    schemes = list(schemes or [config.scheme])
    problem = make_problem(config.problem)
    reports = []
    for scheme in schemes:
        scheme_config = config.merged({"scheme": scheme}).scheme_config()
        report = RunReport(problem.name, scheme_config.scheme.value)
        for nx in grids:
            grid = problem.make_grid(nx, nx if problem.ndim == 2 else None)
            result, _ = measure(problem, grid, scheme_config, config.out_dir)
            report.results.append(result)
        reports.append(report)
    for path in write_tables(reports, config.out_dir):
        _logger.info(f"Wrote {path}")
    return reports


def reference(problem_name: str, out_dir: str, force: bool = False) -> str:
    """
    Generates (or with `force` regenerates) the cached reference of a problem.

    Raises:
        UnknownProblemError: When the problem name is not registered.
        MissingReferenceError: When the problem has no reference recipe.
    """
    problem = make_problem(problem_name)
    load_reference(problem, out_dir, generate_reference, force=force)
    assert problem.reference_nx is not None
    return reference_path(out_dir, problem.name, problem.reference_nx)
