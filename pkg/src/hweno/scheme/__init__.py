# Copyright hweno-solver contributors. All Rights Reserved.

from .core import (
    GHOST,
    BoundaryCondition,
    Grid1D,
    Grid2D,
    HermiteState,
    NonFiniteStateError,
    SchemeConfig,
)
from .solver import Residual, residual_1d, residual_2d, rk3_stages, rk3_step
from .systems import InadmissibleStateError

__all__ = [
    "GHOST",
    "BoundaryCondition",
    "Grid1D",
    "Grid2D",
    "HermiteState",
    "InadmissibleStateError",
    "NonFiniteStateError",
    "Residual",
    "SchemeConfig",
    "residual_1d",
    "residual_2d",
    "rk3_stages",
    "rk3_step",
]
