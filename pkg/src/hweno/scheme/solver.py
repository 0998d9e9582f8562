# Copyright hweno-solver contributors. All Rights Reserved.

"""
Semi-discrete residual operators and the staged SSP-RK3 driver.

Interface fluxes are computed on whole grid lines at once: for an axis with n interior
points the n + 1 interfaces x_{k+1/2}, k = GHOST-1 .. GHOST+n-1, are addressed through
shifted views of the padded arrays, one view per stencil node.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence, Tuple

import numpy as np

from .core import (
    GHOST,
    Grid,
    HermiteState,
    LimiterMode,
    NonFiniteStateError,
    SchemeConfig,
    apply_boundary,
    axes_of,
    interior,
    wave_speeds,
)
from .handlers import HwenoHandler, get_scheme_handler
from .limiter import limit_state
from .reconstruct_hweno import split_flux_lf

if TYPE_CHECKING:  # pragma: no cover
    from ..bench.problems import Problem

_logger = logging.getLogger(__name__)

MIXED_WEIGHTS = (-1.0 / 12.0, 7.0 / 12.0, 7.0 / 12.0, -1.0 / 12.0)


@dataclass
class Residual:
    """Time derivatives of the interior u, v and (2D) w."""

    du: np.ndarray
    dv: np.ndarray
    dw: Optional[np.ndarray] = None


def mixed_flux(values: Sequence[np.ndarray]) -> np.ndarray:
    """Unsplit fourth-order interface value at j+1/2 from the nodes j-1, j, j+1, j+2."""
    a, b, c, d = values
    w0, w1, w2, w3 = MIXED_WEIGHTS
    return w0 * a + w1 * b + w2 * c + w3 * d


def _slab(arr: np.ndarray, axis: int) -> np.ndarray:
    """Full extent along `axis`, interior along the other axis."""
    index: list = [slice(None)] + [slice(GHOST, -GHOST)] * (arr.ndim - 1)
    index[axis + 1] = slice(None)
    return arr[tuple(index)]


def _nodes(slab: np.ndarray, axis: int, offset: int) -> np.ndarray:
    index: list = [slice(None)] * slab.ndim
    index[axis + 1] = slice(GHOST - 1 + offset, slab.shape[axis + 1] - GHOST + offset)
    return slab[tuple(index)]


def _difference(fluxes: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    return np.diff(fluxes, axis=axis + 1) / spacing


def _check_flux(name: str, fluxes: np.ndarray, axis: int) -> None:
    bad = ~np.isfinite(fluxes)
    if bad.any():
        index = tuple(int(i) for i in np.argwhere(bad)[0])
        _logger.error(f"Non-finite {name} along axis {axis} at (component, interface) {index}")
        raise NonFiniteStateError(name, index)


def axis_fluxes(
    state: HermiteState,
    axis: int,
    spacing: float,
    alpha: float,
    problem: "Problem",
    config: SchemeConfig,
    handler: Optional[HwenoHandler] = None,
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Numerical value and derivative fluxes at every interface along `axis`, using the
    derivative field of that axis (v for x, w for y).
    """
    handler = handler or get_scheme_handler(config.scheme)
    law = problem.law
    u = _slab(state.u, axis)
    d = _slab(state.derivative(axis), axis)
    f = law.flux(u, axis)
    h = law.jacobian_vector(u, d, axis) if handler.evolves_derivatives else np.zeros_like(f)

    offsets = handler.offsets
    f_split = [split_flux_lf(_nodes(f, axis, o), _nodes(u, axis, o), alpha) for o in offsets]
    h_split = [split_flux_lf(_nodes(h, axis, o), _nodes(d, axis, o), alpha) for o in offsets]
    frame = law.frame(_nodes(u, axis, 0), _nodes(u, axis, 1), axis)

    f_hat, h_hat = handler.interface_fluxes(f_split, h_split, spacing, frame, config)
    _check_flux("f_hat", f_hat, axis)
    if h_hat is not None:
        _check_flux("h_hat", h_hat, axis)
    return f_hat, h_hat


def _mixed_term(
    state: HermiteState,
    deriv: np.ndarray,
    flux_axis: int,
    sweep: int,
    spacing: float,
    problem: "Problem",
) -> np.ndarray:
    """
    Difference along `sweep` of the unsplit flux f'(u) d, where f is the flux of
    `flux_axis` (g'(u) v along y, f'(u) w along x).
    """
    u = _slab(state.u, sweep)
    d = _slab(deriv, sweep)
    nodes = problem.law.jacobian_vector(u, d, flux_axis)
    fluxes = mixed_flux([_nodes(nodes, sweep, o) for o in (-1, 0, 1, 2)])
    _check_flux("mixed", fluxes, sweep)
    return _difference(fluxes, sweep, spacing)


def _zero_solid(residual: Residual, grid: Grid, problem: "Problem") -> Residual:
    mask = problem.solid_mask(grid)
    if mask is None:
        return residual
    for arr in (residual.du, residual.dv, residual.dw):
        if arr is not None:
            arr[:, mask] = 0.0
    return residual


def residual_1d(
    state: HermiteState,
    grid: Grid,
    problem: "Problem",
    config: SchemeConfig,
    alphas: Optional[Tuple[float, ...]] = None,
) -> Residual:
    """
    L1 = -(f_hat_{i+1/2} - f_hat_{i-1/2}) / dx and L2 = -(h_hat_{i+1/2} - h_hat_{i-1/2}) / dx
    on a ghost-filled 1D state.
    """
    handler = get_scheme_handler(config.scheme)
    alphas = alphas or wave_speeds(state, problem)
    (axis_grid,) = axes_of(grid)
    f_hat, h_hat = axis_fluxes(state, 0, axis_grid.dx, alphas[0], problem, config, handler)
    du = -_difference(f_hat, 0, axis_grid.dx)
    dv = np.zeros_like(du) if h_hat is None else -_difference(h_hat, 0, axis_grid.dx)
    return _zero_solid(Residual(du, dv), grid, problem)


def residual_2d(
    state: HermiteState,
    grid: Grid,
    problem: "Problem",
    config: SchemeConfig,
    alphas: Optional[Tuple[float, ...]] = None,
) -> Residual:
    """
    du/dt = -Dx f_hat - Dy g_hat
    dv/dt = -Dx h_hat - Dy xi_hat
    dw/dt = -Dx eta_hat - Dy theta_hat

    where xi = g'(u) v and eta = f'(u) w use the unsplit mixed stencil.
    """
    if state.w is None:
        raise ValueError("A 2D residual needs the y-derivative field w")
    handler = get_scheme_handler(config.scheme)
    alphas = alphas or wave_speeds(state, problem)
    x_axis, y_axis = axes_of(grid)

    f_hat, h_hat = axis_fluxes(state, 0, x_axis.dx, alphas[0], problem, config, handler)
    g_hat, theta_hat = axis_fluxes(state, 1, y_axis.dx, alphas[1], problem, config, handler)
    du = -_difference(f_hat, 0, x_axis.dx) - _difference(g_hat, 1, y_axis.dx)
    if h_hat is None or theta_hat is None:
        return _zero_solid(Residual(du, np.zeros_like(du), np.zeros_like(du)), grid, problem)

    xi_term = _mixed_term(state, state.v, 1, 1, y_axis.dx, problem)
    eta_term = _mixed_term(state, state.w, 0, 0, x_axis.dx, problem)
    dv = -_difference(h_hat, 0, x_axis.dx) - xi_term
    dw = -eta_term - _difference(theta_hat, 1, y_axis.dx)
    return _zero_solid(Residual(du, dv, dw), grid, problem)


def residual(
    state: HermiteState,
    grid: Grid,
    problem: "Problem",
    config: SchemeConfig,
    alphas: Optional[Tuple[float, ...]] = None,
) -> Residual:
    if state.ndim == 1:
        return residual_1d(state, grid, problem, config, alphas)
    return residual_2d(state, grid, problem, config, alphas)


def fill_ghosts(state: HermiteState, grid: Grid, problem: "Problem", t: float) -> HermiteState:
    """Boundary ghosts plus any internal solid cells the problem defines."""
    apply_boundary(state, grid, problem.bc, t)
    if problem.internal_boundary is not None:
        problem.internal_boundary(state, grid, t)
    return state


def _with_derivatives(state: HermiteState, limited: Tuple[np.ndarray, ...]) -> HermiteState:
    out = state.copy()
    interior(out.v)[...] = limited[0]
    if out.w is not None:
        interior(out.w)[...] = limited[1]
    return out


def rk3_stages(
    state: HermiteState,
    dt: float,
    grid: Grid,
    problem: "Problem",
    config: SchemeConfig,
    t: float = 0.0,
    alphas: Optional[Tuple[float, ...]] = None,
) -> Tuple[HermiteState, HermiteState, HermiteState]:
    """
    The three SSP-RK3 stage states u^(1), u^(2) and u^(n+1) of one step from t to t + dt.

    The u-stages combine u^n, u^(1), u^(2) as they are. The derivative stages combine the
    limited derivatives of v^n, v^(1), v^(2), while every residual evaluation receives the
    stage derivatives unmodified. With the limiter off the limited derivatives are the
    derivatives themselves; in "everywhere" mode the residuals see the limited ones too.

    Raises:
        NonFiniteStateError: If a field turns NaN or Inf; the message names the stage.
    """
    handler = get_scheme_handler(config.scheme)
    spacing = tuple(a.dx for a in axes_of(grid))

    def limited(s: HermiteState) -> Tuple[np.ndarray, ...]:
        if not handler.evolves_derivatives:
            return tuple(interior(f).copy() for _, f in s.fields()[1:])
        return limit_state(s, spacing, config)

    def evaluate(s: HermiteState, lim: Tuple[np.ndarray, ...], tt: float) -> Residual:
        if config.limiter_mode == LimiterMode.EVERYWHERE and handler.evolves_derivatives:
            s = fill_ghosts(_with_derivatives(s, lim), grid, problem, tt)
        return residual(s, grid, problem, config, alphas)

    def advance(
        base: HermiteState,
        base_lim: Tuple[np.ndarray, ...],
        stage: HermiteState,
        stage_lim: Tuple[np.ndarray, ...],
        res: Residual,
        keep: float,
        name: str,
    ) -> HermiteState:
        out = base.copy()
        move = 1.0 - keep
        interior(out.u)[...] = keep * interior(base.u) + move * (interior(stage.u) + dt * res.du)
        interior(out.v)[...] = keep * base_lim[0] + move * (stage_lim[0] + dt * res.dv)
        if out.w is not None and res.dw is not None:
            interior(out.w)[...] = keep * base_lim[1] + move * (stage_lim[1] + dt * res.dw)
        out.check_finite(stage=name)
        return out

    s0 = fill_ghosts(state.copy(), grid, problem, t)
    alphas = alphas or wave_speeds(s0, problem)
    lim0 = limited(s0)
    s1 = advance(s0, lim0, s0, lim0, evaluate(s0, lim0, t), 0.0, "stage 1")

    fill_ghosts(s1, grid, problem, t + dt)
    lim1 = limited(s1)
    s2 = advance(s0, lim0, s1, lim1, evaluate(s1, lim1, t + dt), 0.75, "stage 2")

    fill_ghosts(s2, grid, problem, t + 0.5 * dt)
    lim2 = limited(s2)
    s3 = advance(s0, lim0, s2, lim2, evaluate(s2, lim2, t + 0.5 * dt), 1.0 / 3.0, "stage 3")
    return s1, s2, s3


def rk3_step(
    state: HermiteState,
    dt: float,
    grid: Grid,
    problem: "Problem",
    config: SchemeConfig,
    t: float = 0.0,
    alphas: Optional[Tuple[float, ...]] = None,
) -> HermiteState:
    """One SSP-RK3 step from t to t + dt; the input state is left untouched."""
    return rk3_stages(state, dt, grid, problem, config, t, alphas)[-1]
