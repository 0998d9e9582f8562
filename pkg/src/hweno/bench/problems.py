# Copyright hweno-solver contributors. All Rights Reserved.

"""
Registry of the benchmark problems: initial data with derivatives, boundary conditions,
final times, and either an exact solution or the recipe of a reference run.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from ..scheme.core import (
    GHOST,
    BoundaryCondition,
    BoundaryKind,
    GhostContext,
    Grid,
    Grid1D,
    Grid2D,
    HermiteState,
    SideCondition,
)
from ..scheme.systems import (
    ConservationLaw,
    EulerLaw,
    EulerParams,
    buckley_leverett_law,
    burgers_law,
    conserved,
    primitive,
)

_logger = logging.getLogger(__name__)

Fields = Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]
InitialFunction = Callable[[Grid], Fields]
ExactFunction = Callable[[Grid, float], np.ndarray]

REFERENCE_NX = 2000
GAS = EulerParams()


class UnknownProblemError(KeyError):
    """Error that is raised when a problem name is not in the registry"""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(name)

    def __str__(self) -> str:
        return f"Unknown problem '{self.name}'. Valid problems are: {', '.join(problem_names())}"


@dataclass(frozen=True)
class Problem:
    name: str
    law: ConservationLaw
    extents: Tuple[float, ...]
    bc: BoundaryCondition
    final_time: float
    initial: InitialFunction
    exact: Optional[ExactFunction] = None
    reference_nx: Optional[int] = None
    smooth: bool = False
    default_nx: int = 80
    default_ny: Optional[int] = None
    solid: Optional[Callable[[Grid], np.ndarray]] = None
    internal_boundary: Optional[Callable[[HermiteState, Grid, float], None]] = None
    description: str = ""

    def __post_init__(self) -> None:
        if not self.final_time > 0:
            raise ValueError(f"{self.name}: final time must be positive, got {self.final_time}")
        if self.exact is not None and self.reference_nx is not None:
            raise ValueError(f"{self.name}: an exact solution and a reference run are exclusive")
        if len(self.extents) != 2 * self.ndim:
            raise ValueError(f"{self.name}: extents {self.extents} do not match {self.ndim}D")

    @property
    def ndim(self) -> int:
        return 1 if self.bc.y is None else 2

    @property
    def euler(self) -> bool:
        return isinstance(self.law, EulerLaw)

    def make_grid(self, nx: Optional[int] = None, ny: Optional[int] = None) -> Grid:
        nx = nx or self.default_nx
        if self.ndim == 1:
            return Grid1D(self.extents[0], self.extents[1], nx)
        ny = ny or self.default_ny or nx
        return Grid2D.from_extents(*self.extents[:2], nx, *self.extents[2:], ny)

    def initial_state(self, grid: Grid) -> HermiteState:
        u, v, w = self.initial(grid)
        return HermiteState.from_interior(u, v, w)

    def solid_mask(self, grid: Grid) -> Optional[np.ndarray]:
        return None if self.solid is None else self.solid(grid)


# Burgers


def _burgers_u0(s: np.ndarray) -> np.ndarray:
    return 0.5 + np.sin(np.pi * s)


def _burgers_du0(s: np.ndarray) -> np.ndarray:
    return np.pi * np.cos(np.pi * s)


def _burgers_primitive(s: np.ndarray) -> np.ndarray:
    return 0.5 * s - np.cos(np.pi * s) / np.pi


def burgers_exact(
    x: np.ndarray, t: float, samples: int = 1025, newton_steps: int = 30
) -> np.ndarray:
    """
    Entropy solution of u_t + (u^2/2)_x = 0 with u(x, 0) = 0.5 + sin(pi x).

    The foot of the characteristic y minimizes U0(y) + (x - y)^2 / (2t) (U0 a primitive of
    the initial data), which also selects the right branch behind a shock. The minimizer is
    located on a sample grid and polished by Newton on y + t u0(y) = x.
    """
    x = np.asarray(x, dtype=float)
    if t == 0:
        return _burgers_u0(x)
    flat = x.reshape(-1)
    lo = flat - 1.5 * t
    hi = flat + 0.5 * t
    fractions = np.linspace(0.0, 1.0, samples)
    ys = lo[:, None] + (hi - lo)[:, None] * fractions[None, :]
    objective = _burgers_primitive(ys) + (flat[:, None] - ys) ** 2 / (2.0 * t)
    best = np.argmin(objective, axis=1)
    y = ys[np.arange(flat.size), best]
    half_width = (hi - lo) / (samples - 1)
    y_lo, y_hi = y - half_width, y + half_width
    for _ in range(newton_steps):
        residual = y + t * _burgers_u0(y) - flat
        slope = 1.0 + t * _burgers_du0(y)
        step = np.where(np.abs(slope) > 1e-12, residual / np.where(slope == 0, 1.0, slope), 0.0)
        y = np.clip(y - step, y_lo, y_hi)
    return ((flat - y) / t).reshape(x.shape)


def _burgers1d_initial(grid: Grid) -> Fields:
    x = grid.centers
    return _burgers_u0(x)[None], _burgers_du0(x)[None], None


def _burgers1d_exact(grid: Grid, t: float) -> np.ndarray:
    return burgers_exact(grid.centers, t)[None]


def _diagonal(grid: Grid) -> np.ndarray:
    x, y = grid.mesh()
    return 0.5 * (x + y)


def _burgers2d_initial(grid: Grid) -> Fields:
    s = _diagonal(grid)
    du = 0.5 * _burgers_du0(s)
    return _burgers_u0(s)[None], du[None], du[None].copy()


def _burgers2d_exact(grid: Grid, t: float) -> np.ndarray:
    return burgers_exact(_diagonal(grid), t)[None]


# Smooth Euler advection


def _euler_advection(rho: np.ndarray, drho: np.ndarray, velocity: Sequence[float]):
    """Conserved state and its derivative for density waves at constant velocity and p = 1."""
    u = conserved(rho, [np.full_like(rho, c) for c in velocity], np.ones_like(rho), GAS)
    speed2 = sum(c * c for c in velocity)
    du = np.stack([drho] + [c * drho for c in velocity] + [0.5 * speed2 * drho])
    return u, du


def _euler1d_initial(grid: Grid) -> Fields:
    x = grid.centers
    rho = 1.0 + 0.2 * np.sin(np.pi * x)
    u, v = _euler_advection(rho, 0.2 * np.pi * np.cos(np.pi * x), [1.0])
    return u, v, None


def _euler1d_exact(grid: Grid, t: float) -> np.ndarray:
    x = grid.centers
    rho = 1.0 + 0.2 * np.sin(np.pi * (x - t))
    return conserved(rho, [np.ones_like(rho)], np.ones_like(rho), GAS)


def _euler2d_initial(grid: Grid) -> Fields:
    x, y = grid.mesh()
    phase = np.pi * (x + y)
    u, v = _euler_advection(1.0 + 0.2 * np.sin(phase), 0.2 * np.pi * np.cos(phase), [1.0, 1.0])
    return u, v, v.copy()


def _euler2d_exact(grid: Grid, t: float) -> np.ndarray:
    x, y = grid.mesh()
    rho = 1.0 + 0.2 * np.sin(np.pi * (x + y - 2.0 * t))
    return conserved(rho, [np.ones_like(rho)] * 2, np.ones_like(rho), GAS)


# Piecewise-constant data; derivatives vanish on both sides of every jump.


def _piecewise_1d(
    states: Sequence[Tuple[float, float, float]], breaks: Sequence[float]
) -> InitialFunction:
    """Euler (rho, mu, p) states separated at `breaks`."""

    def initial(grid: Grid) -> Fields:
        x = grid.centers
        region = np.searchsorted(np.asarray(breaks), x, side="right")
        prim = np.asarray(states, dtype=float)[region].T
        u = conserved(prim[0], [prim[1]], prim[2], GAS)
        return u, np.zeros_like(u), None

    return initial


def _shu_osher_initial(grid: Grid) -> Fields:
    x = grid.centers
    left = x < -4.0
    rho = np.where(left, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
    mu = np.where(left, 2.629369, 0.0)
    p = np.where(left, 10.333333, 1.0)
    u = conserved(rho, [mu], p, GAS)
    # At rest with constant pressure only the density varies.
    v = np.zeros_like(u)
    v[0] = np.where(left, 0.0, np.cos(5.0 * x))
    return u, v, None


def _buckley_leverett_initial(grid: Grid) -> Fields:
    x = grid.centers
    u = np.where((x >= -0.5) & (x <= 0.0), 1.0, 0.0)[None]
    return u, np.zeros_like(u), None


# Double Mach reflection


def normal_shock_state(
    mach: float, rho: float, p: float, params: EulerParams = GAS
) -> Tuple[float, float, float]:
    """
    Rankine-Hugoniot state behind a shock of the given Mach number moving into gas at rest:
    (rho, speed of the gas in the shock direction, p).
    """
    g = params.gas_gamma
    m2 = mach * mach
    rho_behind = rho * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0)
    p_behind = p * (1.0 + 2.0 * g / (g + 1.0) * (m2 - 1.0))
    shock_speed = mach * math.sqrt(g * p / rho)
    return rho_behind, shock_speed * (1.0 - rho / rho_behind), p_behind


MACH10_PRE = (1.4, 1.0)
MACH10_ANGLE = math.pi / 3.0
MACH10_X0 = 1.0 / 6.0


def _mach10_states() -> Tuple[np.ndarray, np.ndarray]:
    rho, speed, p = normal_shock_state(10.0, *MACH10_PRE)
    # The gas behind the shock moves normal to the 60 degree shock line.
    direction = (math.sin(MACH10_ANGLE), -math.cos(MACH10_ANGLE))
    post = conserved(np.array(rho), [np.array(speed * c) for c in direction], np.array(p), GAS)
    pre = conserved(np.array(MACH10_PRE[0]), [np.array(0.0)] * 2, np.array(MACH10_PRE[1]), GAS)
    return post, pre


def mach10_shock_position(y: np.ndarray, t: float) -> np.ndarray:
    """x-position of the incident shock line at height y and time t."""
    shock_speed = 10.0 * math.sqrt(GAS.gas_gamma * MACH10_PRE[1] / MACH10_PRE[0])
    return MACH10_X0 + y / math.tan(MACH10_ANGLE) + shock_speed * t / math.sin(MACH10_ANGLE)


def _select(mask: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    shape = (-1,) + (1,) * mask.ndim
    return np.where(mask[None], np.reshape(a, shape), np.reshape(b, shape))


def _double_mach_initial(grid: Grid) -> Fields:
    post, pre = _mach10_states()
    x, y = grid.mesh()
    u = _select(x < mach10_shock_position(y, 0.0), post, pre)
    return u, np.zeros_like(u), np.zeros_like(u)


def _double_mach_bottom(context: GhostContext):
    post, _ = _mach10_states()
    mirrored_u, mirrored_v, mirrored_w = context.mirrored
    upstream = context.x < MACH10_X0
    u = np.where(upstream[None], np.reshape(post, (-1, 1, 1)), mirrored_u)
    v = np.where(upstream[None], 0.0, mirrored_v)
    w = np.where(upstream[None], 0.0, mirrored_w)
    return u, v, w


def _double_mach_top(context: GhostContext):
    post, pre = _mach10_states()
    u = _select(context.x < mach10_shock_position(context.y, context.t), post, pre)
    return u, np.zeros_like(u), np.zeros_like(u)


def _double_mach_bc() -> BoundaryCondition:
    post, _ = _mach10_states()
    return BoundaryCondition(
        x=(SideCondition(BoundaryKind.INFLOW, tuple(post)), SideCondition(BoundaryKind.OUTFLOW)),
        y=(
            SideCondition(BoundaryKind.PRESCRIBED, _double_mach_bottom, odd_components=(2,)),
            SideCondition(BoundaryKind.PRESCRIBED, _double_mach_top),
        ),
    )


# Forward facing step

STEP_CORNER = (0.6, 0.2)
STEP_INFLOW = (1.4, 3.0, 0.0, 1.0)


def _step_indices(grid: Grid) -> Tuple[int, int]:
    """Interior indices of the first solid column and the first fluid row above the step."""
    i0 = (STEP_CORNER[0] - grid.x.x_min) / grid.dx
    j0 = (STEP_CORNER[1] - grid.y.x_min) / grid.dy
    if abs(i0 - round(i0)) > 1e-9 or abs(j0 - round(j0)) > 1e-9:
        raise ValueError(
            f"The step faces x={STEP_CORNER[0]}, y={STEP_CORNER[1]} must fall on cell faces; "
            f"got dx={grid.dx}, dy={grid.dy}"
        )
    return int(round(i0)), int(round(j0))


def _step_solid(grid: Grid) -> np.ndarray:
    i0, j0 = _step_indices(grid)
    mask = np.zeros(grid.shape, dtype=bool)
    mask[i0:, :j0] = True
    return mask


def _step_inflow() -> np.ndarray:
    rho, mu, nu, p = STEP_INFLOW
    return conserved(np.array(rho), [np.array(mu), np.array(nu)], np.array(p), GAS)


def _forward_step_initial(grid: Grid) -> Fields:
    u = np.broadcast_to(_step_inflow().reshape(-1, 1, 1), (4,) + grid.shape).copy()
    return u, np.zeros_like(u), np.zeros_like(u)


def _parity(normal_axis: int, derivative_axis: Optional[int]) -> np.ndarray:
    """
    Sign pattern of a mirror image across a wall normal to `normal_axis`: the normal
    momentum is odd, and a derivative along the normal flips every sign once more.
    """
    signs = np.ones(4)
    signs[1 + normal_axis] = -1.0
    if derivative_axis == normal_axis:
        signs = -signs
    return signs[:, None]


def _mirror_into_step(state: HermiteState, grid: Grid) -> None:
    """Solid layers next to the step faces take the reflected fluid values."""
    i0, j0 = _step_indices(grid)
    first_solid_column, first_fluid_row = i0 + GHOST, j0 + GHOST
    fields = ((state.u, None), (state.v, 0), (state.w, 1))

    # Front face x = 0.6, over the rows below the step top including the bottom ghosts.
    rows = slice(0, first_fluid_row)
    for k in range(min(GHOST, grid.nx - i0)):
        solid, fluid = first_solid_column + k, first_solid_column - 1 - k
        for arr, axis in fields:
            arr[:, solid, rows] = _parity(0, axis) * arr[:, fluid, rows]

    # Top face y = 0.2, written last so the corner block sees the flow above the step.
    cols = slice(first_solid_column, None)
    for k in range(min(GHOST, j0)):
        solid, fluid = first_fluid_row - 1 - k, first_fluid_row + k
        for arr, axis in fields:
            arr[:, cols, solid] = _parity(1, axis) * arr[:, cols, fluid]


def _corner_fix(state: HermiteState, grid: Grid) -> None:
    """
    The two fluid points touching the corner from above keep the entropy p/rho^gamma of the
    point diagonally below-left of the corner and their own total enthalpy.
    """
    i0, j0 = _step_indices(grid)
    g = GAS.gas_gamma
    reference = state.u[:, GHOST + i0 - 1, GHOST + j0 - 1]
    rho_ref, _, p_ref = primitive(reference, GAS)
    entropy = p_ref / rho_ref**g
    for i in (i0 - 1, i0):
        cell = state.u[:, GHOST + i, GHOST + j0]
        rho, velocity, p = primitive(cell, GAS)
        enthalpy = g / (g - 1.0) * p / rho + 0.5 * float(np.sum(velocity**2))
        new_rho = (p / entropy) ** (1.0 / g)
        kinetic = max(enthalpy - g / (g - 1.0) * p / new_rho, 0.0)
        speed = float(np.sqrt(np.sum(velocity**2)))
        scale = math.sqrt(2.0 * kinetic) / speed if speed > 0 else 0.0
        cell[...] = conserved(new_rho, [c * scale for c in velocity], p, GAS)


def _forward_step_hook(state: HermiteState, grid: Grid, t: float) -> None:
    _corner_fix(state, grid)
    _mirror_into_step(state, grid)


def _forward_step_bc() -> BoundaryCondition:
    wall = SideCondition(BoundaryKind.REFLECTIVE, odd_components=(2,))
    return BoundaryCondition(
        x=(
            SideCondition(BoundaryKind.INFLOW, tuple(_step_inflow())),
            SideCondition(BoundaryKind.OUTFLOW),
        ),
        y=(wall, wall),
    )


# Registry


def _outflow(ndim: int = 1) -> BoundaryCondition:
    pair = (SideCondition(BoundaryKind.OUTFLOW), SideCondition(BoundaryKind.OUTFLOW))
    return BoundaryCondition(pair, pair if ndim == 2 else None)


def _registry() -> Dict[str, Callable[[], Problem]]:
    shu_osher_left = conserved(np.array(3.857143), [np.array(2.629369)], np.array(10.333333), GAS)
    return {
        "burgers1d-smooth": lambda: Problem(
            "burgers1d-smooth",
            burgers_law(1),
            (0.0, 2.0),
            BoundaryCondition.periodic(1),
            0.5 / math.pi,
            _burgers1d_initial,
            exact=_burgers1d_exact,
            smooth=True,
            description="Burgers, u0 = 0.5 + sin(pi x), still smooth at T",
        ),
        "euler1d-smooth": lambda: Problem(
            "euler1d-smooth",
            EulerLaw(1, GAS),
            (0.0, 2.0),
            BoundaryCondition.periodic(1),
            2.0,
            _euler1d_initial,
            exact=_euler1d_exact,
            smooth=True,
            description="Euler density wave rho = 1 + 0.2 sin(pi x), mu = p = 1",
        ),
        "burgers1d-shock": lambda: Problem(
            "burgers1d-shock",
            burgers_law(1),
            (0.0, 2.0),
            BoundaryCondition.periodic(1),
            1.5 / math.pi,
            _burgers1d_initial,
            exact=_burgers1d_exact,
            description="Burgers after shock formation",
        ),
        "buckley-leverett": lambda: Problem(
            "buckley-leverett",
            buckley_leverett_law(),
            (-1.0, 1.0),
            _outflow(1),
            0.4,
            _buckley_leverett_initial,
            reference_nx=REFERENCE_NX,
            description="Non-convex Buckley-Leverett flux, u0 = 1 on [-0.5, 0]",
        ),
        "lax": lambda: Problem(
            "lax",
            EulerLaw(1, GAS),
            (-0.5, 0.5),
            _outflow(1),
            0.16,
            _piecewise_1d([(0.445, 0.698, 3.528), (0.5, 0.0, 0.571)], [0.0]),
            reference_nx=REFERENCE_NX,
            default_nx=200,
            description="Lax shock tube",
        ),
        "shu-osher": lambda: Problem(
            "shu-osher",
            EulerLaw(1, GAS),
            (-5.0, 5.0),
            BoundaryCondition(
                (
                    SideCondition(BoundaryKind.INFLOW, tuple(shu_osher_left)),
                    SideCondition(BoundaryKind.OUTFLOW),
                )
            ),
            1.8,
            _shu_osher_initial,
            reference_nx=REFERENCE_NX,
            default_nx=400,
            description="Mach 3 shock running into density sine waves",
        ),
        "blast": lambda: Problem(
            "blast",
            EulerLaw(1, GAS),
            (0.0, 1.0),
            BoundaryCondition(
                (
                    SideCondition(BoundaryKind.REFLECTIVE, odd_components=(1,)),
                    SideCondition(BoundaryKind.REFLECTIVE, odd_components=(1,)),
                )
            ),
            0.038,
            _piecewise_1d([(1.0, 0.0, 1e3), (1.0, 0.0, 1e-2), (1.0, 0.0, 1e2)], [0.1, 0.9]),
            reference_nx=REFERENCE_NX,
            default_nx=800,
            description="Interacting blast waves between reflective walls",
        ),
        "burgers2d-smooth": lambda: Problem(
            "burgers2d-smooth",
            burgers_law(2),
            (0.0, 4.0, 0.0, 4.0),
            BoundaryCondition.periodic(2),
            0.5 / math.pi,
            _burgers2d_initial,
            exact=_burgers2d_exact,
            smooth=True,
            default_nx=40,
            description="2D Burgers, u0 = 0.5 + sin(pi (x + y) / 2)",
        ),
        "euler2d-smooth": lambda: Problem(
            "euler2d-smooth",
            EulerLaw(2, GAS),
            (0.0, 2.0, 0.0, 2.0),
            BoundaryCondition.periodic(2),
            2.0,
            _euler2d_initial,
            exact=_euler2d_exact,
            smooth=True,
            default_nx=40,
            description="2D Euler density wave along the diagonal",
        ),
        "burgers2d-shock": lambda: Problem(
            "burgers2d-shock",
            burgers_law(2),
            (0.0, 4.0, 0.0, 4.0),
            BoundaryCondition.periodic(2),
            1.5 / math.pi,
            _burgers2d_initial,
            exact=_burgers2d_exact,
            default_nx=80,
            description="2D Burgers after shock formation",
        ),
        "double-mach": lambda: Problem(
            "double-mach",
            EulerLaw(2, GAS),
            (0.0, 4.0, 0.0, 1.0),
            _double_mach_bc(),
            0.2,
            _double_mach_initial,
            default_nx=480,
            default_ny=120,
            description="Mach 10 shock reflecting off a wedge",
        ),
        "forward-step": lambda: Problem(
            "forward-step",
            EulerLaw(2, GAS),
            (0.0, 3.0, 0.0, 1.0),
            _forward_step_bc(),
            4.0,
            _forward_step_initial,
            default_nx=240,
            default_ny=80,
            solid=_step_solid,
            internal_boundary=_forward_step_hook,
            description="Mach 3 wind tunnel with a forward facing step",
        ),
    }


def problem_names() -> Tuple[str, ...]:
    return tuple(_registry())


def make_problem(name: str) -> Problem:
    """
    Returns the fully populated problem registered under `name`.

    Raises:
        UnknownProblemError: If no problem has that name; the message lists the valid names.
    """
    factories = _registry()
    if name not in factories:
        raise UnknownProblemError(name)
    return factories[name]()
