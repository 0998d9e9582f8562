# Copyright hweno-solver contributors. All Rights Reserved.

"""
Grids, Hermite states, scheme configuration, ghost-layer boundary handling and
time-step selection shared by every scheme.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Callable, Optional, Sequence, Tuple, Union

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from ..bench.problems import Problem

_logger = logging.getLogger(__name__)

GHOST = 3
"""Ghost points per side per axis."""


class NonFiniteStateError(RuntimeError):
    """Error that is raised when a NaN or Inf is found in a field"""

    def __init__(
        self,
        field_name: str,
        index: Tuple[int, ...],
        stage: Optional[str] = None,
    ) -> None:
        self.field_name = field_name
        self.index = index
        self.stage = stage
        where = f" after {stage}" if stage else ""
        super().__init__(
            f"Non-finite value in field '{field_name}' at (component, *interior index) "
            f"{index}{where}"
        )


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    nx: int

    def __post_init__(self) -> None:
        if self.nx < 6:
            raise ValueError(f"A grid needs at least 6 cells, got nx={self.nx}")
        if not self.x_max > self.x_min:
            raise ValueError(f"Empty domain [{self.x_min}, {self.x_max}]")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def centers(self) -> np.ndarray:
        """Cell centers x_i = x_min + (i - 1/2) dx, i = 1..nx."""
        return self.x_min + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def padded_centers(self) -> np.ndarray:
        """Cell centers including the ghost margin."""
        return self.x_min + (np.arange(self.nx + 2 * GHOST) - GHOST + 0.5) * self.dx

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.nx,)

    @property
    def ndim(self) -> int:
        return 1


@dataclass(frozen=True)
class Grid2D:
    x: Grid1D
    y: Grid1D

    @classmethod
    def from_extents(
        cls, x_min: float, x_max: float, nx: int, y_min: float, y_max: float, ny: int
    ) -> "Grid2D":
        return cls(Grid1D(x_min, x_max, nx), Grid1D(y_min, y_max, ny))

    @property
    def nx(self) -> int:
        return self.x.nx

    @property
    def ny(self) -> int:
        return self.y.nx

    @property
    def dx(self) -> float:
        return self.x.dx

    @property
    def dy(self) -> float:
        return self.y.dx

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.nx, self.ny)

    @property
    def ndim(self) -> int:
        return 2

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """Interior cell centers as (nx, ny) arrays."""
        return np.meshgrid(self.x.centers, self.y.centers, indexing="ij")

    def axis(self, axis: int) -> Grid1D:
        return self.x if axis == 0 else self.y


Grid = Union[Grid1D, Grid2D]


def axes_of(grid: Grid) -> Tuple[Grid1D, ...]:
    return (grid,) if isinstance(grid, Grid1D) else (grid.x, grid.y)


def interior(arr: np.ndarray) -> np.ndarray:
    """View of the interior points of a padded field with component axis first."""
    index = (slice(None),) + (slice(GHOST, -GHOST),) * (arr.ndim - 1)
    return arr[index]


@dataclass
class HermiteState:
    """
    Point values of the solution and its derivatives on a padded grid.

    Arrays are shaped (ncomp, nx + 2*GHOST) in 1D and (ncomp, nx + 2*GHOST, ny + 2*GHOST)
    in 2D. `v` is the x-derivative and `w` the y-derivative (2D only).
    """

    u: np.ndarray
    v: np.ndarray
    w: Optional[np.ndarray] = None

    @classmethod
    def allocate(cls, grid: Grid, ncomp: int) -> "HermiteState":
        shape = (ncomp,) + tuple(n + 2 * GHOST for n in grid.shape)
        w = np.zeros(shape) if grid.ndim == 2 else None
        return cls(np.zeros(shape), np.zeros(shape), w)

    @classmethod
    def from_interior(
        cls,
        u: np.ndarray,
        v: np.ndarray,
        w: Optional[np.ndarray] = None,
    ) -> "HermiteState":
        """Builds a padded state from interior arrays; ghosts are left as zeros."""
        pad = ((0, 0),) + ((GHOST, GHOST),) * (u.ndim - 1)
        return cls(
            np.pad(np.asarray(u, dtype=float), pad),
            np.pad(np.asarray(v, dtype=float), pad),
            None if w is None else np.pad(np.asarray(w, dtype=float), pad),
        )

    @property
    def ndim(self) -> int:
        return self.u.ndim - 1

    @property
    def ncomp(self) -> int:
        return self.u.shape[0]

    def fields(self) -> Tuple[Tuple[str, np.ndarray], ...]:
        named = (("u", self.u), ("v", self.v))
        return named + ((("w", self.w),) if self.w is not None else ())

    def derivative(self, axis: int) -> np.ndarray:
        if axis == 0:
            return self.v
        if self.w is None:
            raise ValueError("A 1D state has no y-derivative")
        return self.w

    def copy(self) -> "HermiteState":
        return HermiteState(
            self.u.copy(), self.v.copy(), None if self.w is None else self.w.copy()
        )

    def check_finite(self, stage: Optional[str] = None) -> None:
        for name, arr in self.fields():
            inner = interior(arr)
            bad = ~np.isfinite(inner)
            if bad.any():
                raise NonFiniteStateError(name, tuple(int(i) for i in np.argwhere(bad)[0]), stage)


class LimiterMode(str, Enum):
    STAGED = "staged"
    OFF = "off"
    EVERYWHERE = "everywhere"


class SchemeName(str, Enum):
    L_HWENO = "l-hweno"
    WENO_JS = "weno-js"


class TimeStepMode(str, Enum):
    AUTO = "auto"
    CFL = "cfl"
    ACCURACY = "accuracy"


WEIGHT_PRESETS = {
    "default": (0.98, 0.01, 0.01),
    "1": (0.99, 0.005, 0.005),
    "2": (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0),
    "3": (0.01, 0.495, 0.495),
}
"""Linear-weight sets used in the blast-wave study (G1..G3 for gamma, D1..D3 for d)."""


def _check_weights(name: str, weights: Sequence[float]) -> None:
    if len(weights) != 3:
        raise ValueError(f"{name} must hold three values, got {weights}")
    if any(w <= 0 for w in weights):
        raise ValueError(f"{name} must be positive, got {weights}")
    if abs(sum(weights) - 1.0) > 1e-12:
        raise ValueError(f"{name} must sum to 1, got {weights} (sum {sum(weights)})")


@dataclass(frozen=True)
class SchemeConfig:
    cfl: float = 0.6
    gamma_weights: Tuple[float, float, float] = (0.98, 0.01, 0.01)
    d_weights: Tuple[float, float, float] = (0.98, 0.01, 0.01)
    epsilon: float = 1e-6
    limiter_mode: LimiterMode = LimiterMode.STAGED
    scheme: SchemeName = SchemeName.L_HWENO
    time_step: TimeStepMode = TimeStepMode.AUTO

    def __post_init__(self) -> None:
        # Accept plain strings for the enum fields.
        object.__setattr__(self, "limiter_mode", LimiterMode(self.limiter_mode))
        object.__setattr__(self, "scheme", SchemeName(self.scheme))
        object.__setattr__(self, "time_step", TimeStepMode(self.time_step))
        object.__setattr__(self, "gamma_weights", tuple(float(g) for g in self.gamma_weights))
        object.__setattr__(self, "d_weights", tuple(float(d) for d in self.d_weights))
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        _check_weights("gamma_weights", self.gamma_weights)
        _check_weights("d_weights", self.d_weights)


class BoundaryKind(str, Enum):
    PERIODIC = "periodic"
    REFLECTIVE = "reflective"
    INFLOW = "inflow"
    OUTFLOW = "outflow"
    PRESCRIBED = "prescribed"


@dataclass(frozen=True)
class GhostContext:
    """
    What a prescribed boundary function gets to see: ghost-point coordinates, the time,
    and the reflective image of the interior next to the boundary (u, v, w).
    """

    x: np.ndarray
    y: Optional[np.ndarray]
    t: float
    mirrored: Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]


GhostFunction = Callable[[GhostContext], Tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]]


@dataclass(frozen=True)
class SideCondition:
    kind: BoundaryKind
    state: Optional[Union[Sequence[float], GhostFunction]] = None
    odd_components: Tuple[int, ...] = ()
    """Components of u that change sign under reflection (the normal momentum)."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", BoundaryKind(self.kind))
        if self.kind in (BoundaryKind.INFLOW, BoundaryKind.PRESCRIBED) and self.state is None:
            raise ValueError(f"A {self.kind.value} boundary needs a state")


@dataclass(frozen=True)
class BoundaryCondition:
    """Per-side conditions: x = (left, right) and, in 2D, y = (bottom, top)."""

    x: Tuple[SideCondition, SideCondition]
    y: Optional[Tuple[SideCondition, SideCondition]] = None

    def __post_init__(self) -> None:
        for name, sides in (("x", self.x), ("y", self.y)):
            if sides is None:
                continue
            periodic = [s.kind == BoundaryKind.PERIODIC for s in sides]
            if any(periodic) and not all(periodic):
                raise ValueError(f"Periodic boundaries must be paired on both {name} sides")

    @classmethod
    def periodic(cls, ndim: int = 1) -> "BoundaryCondition":
        pair = (SideCondition(BoundaryKind.PERIODIC), SideCondition(BoundaryKind.PERIODIC))
        return cls(pair, pair if ndim == 2 else None)

    def sides(self, axis: int) -> Tuple[SideCondition, SideCondition]:
        sides = self.x if axis == 0 else self.y
        if sides is None:
            raise ValueError(f"No boundary condition given for axis {axis}")
        return sides


def _index(ndim: int, axis: int, sl: Union[slice, np.ndarray, int]) -> tuple:
    index: list = [slice(None)] * ndim
    index[axis] = sl
    return tuple(index)


def _fill_side(
    state: HermiteState,
    grid: Grid,
    axis: int,
    side: int,
    cond: SideCondition,
    t: float,
) -> None:
    """Fills GHOST layers on one side of one axis for u, v and w."""
    ndim = state.u.ndim
    ax = axis + 1
    n = state.u.shape[ax] - 2 * GHOST
    ks = np.arange(GHOST)
    if side == 0:
        ghost = GHOST - 1 - ks
        mirror = GHOST + ks
        wrap = ghost + n
        edge = np.full(GHOST, GHOST)
    else:
        ghost = GHOST + n + ks
        mirror = GHOST + n - 1 - ks
        wrap = ghost - n
        edge = np.full(GHOST, GHOST + n - 1)

    gi = _index(ndim, ax, ghost)
    fields = [("u", state.u), ("v", state.v)] + ([("w", state.w)] if state.w is not None else [])

    if cond.kind == BoundaryKind.PERIODIC:
        for _, arr in fields:
            arr[gi] = arr[_index(ndim, ax, wrap)]
        return
    if cond.kind == BoundaryKind.OUTFLOW:
        for _, arr in fields:
            arr[gi] = arr[_index(ndim, ax, edge)]
        return

    # Reflective image: u even except the normal momentum, the normal derivative takes the
    # opposite parity of its component, the tangential derivative keeps it.
    parity = np.ones(state.ncomp)
    parity[list(cond.odd_components)] = -1.0
    shape = (state.ncomp,) + (1,) * (ndim - 1)
    even = parity.reshape(shape)
    mi = _index(ndim, ax, mirror)
    images = {}
    for name, arr in fields:
        normal = (name == "v" and axis == 0) or (name == "w" and axis == 1)
        images[name] = arr[mi] * (-even if normal else even)

    if cond.kind == BoundaryKind.REFLECTIVE:
        for name, arr in fields:
            arr[gi] = images[name]
        return

    axes = axes_of(grid)
    coords = [a.padded_centers for a in axes]
    coords[axis] = coords[axis][ghost]
    mesh = np.meshgrid(*coords, indexing="ij")
    if cond.kind == BoundaryKind.INFLOW:
        value = np.asarray(cond.state, dtype=float).reshape(shape)
        state.u[gi] = np.broadcast_to(value, state.u[gi].shape)
        state.v[gi] = 0.0
        if state.w is not None:
            state.w[gi] = 0.0
        return

    assert callable(cond.state)
    context = GhostContext(
        x=mesh[0],
        y=mesh[1] if len(mesh) > 1 else None,
        t=t,
        mirrored=(images["u"], images["v"], images.get("w")),
    )
    gu, gv, gw = cond.state(context)
    if state.w is not None and gw is None:
        raise ValueError(f"The prescribed boundary on axis {axis} gave no w ghosts for a 2D state")
    state.u[gi] = gu
    state.v[gi] = gv
    if state.w is not None:
        state.w[gi] = gw


def apply_boundary(
    state: HermiteState,
    grid: Grid,
    bc: BoundaryCondition,
    t: float = 0.0,
) -> HermiteState:
    """
    Fills the ghost layers of `state` in place and returns it.

    x-ghosts are filled first over every padded row, then y-ghosts over every padded column,
    so the corner blocks only ever depend on interior data.

    Raises:
        NonFiniteStateError: If an interior value of u, v or w is NaN or Inf.
    """
    state.check_finite()
    for axis in range(state.ndim):
        left, right = bc.sides(axis)
        _fill_side(state, grid, axis, 0, left, t)
        _fill_side(state, grid, axis, 1, right, t)
    return state


def wave_speeds(state: HermiteState, problem: "Problem") -> Tuple[float, ...]:
    """Global wave-speed bound per axis, from the interior of the current state."""
    u = interior(state.u)
    speeds = tuple(float(problem.law.max_wave_speed(u, axis)) for axis in range(state.ndim))
    for axis, alpha in enumerate(speeds):
        if not math.isfinite(alpha):
            raise NonFiniteStateError("alpha", (axis,))
    return speeds


def compute_dt(
    state: HermiteState,
    grid: Grid,
    cfl: float,
    problem: "Problem",
    t: float = 0.0,
    accuracy: bool = False,
) -> float:
    """
    Time increment dt = cfl dx / alpha in 1D and cfl / (alpha_x/dx + alpha_y/dy) in 2D, clipped
    so the last step lands on the final time. With `accuracy` every dx is raised to the
    power 5/3 so the time error stays below the spatial error of a fifth-order scheme.
    """
    remaining = problem.final_time - t
    power = 5.0 / 3.0 if accuracy else 1.0
    rate = 0.0
    for alpha, axis in zip(wave_speeds(state, problem), axes_of(grid)):
        rate += alpha / axis.dx**power
    if rate == 0.0:
        _logger.debug("Zero wave speed, stepping straight to the final time")
        return remaining
    return min(cfl / rate, remaining)
