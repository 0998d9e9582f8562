# Copyright hweno-solver contributors. All Rights Reserved.

"""
Hermite WENO limiter for the derivative field: a quartic and two linear interpolants of the
point values, combined with nonlinear weights into a modified derivative.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .core import GHOST, HermiteState, LimiterMode, SchemeConfig, interior
from .reconstruct_hweno import SmoothnessTriple, combine, difference_measure, nonlinear_weights


@dataclass(frozen=True)
class LimiterCandidates:
    dq0: np.ndarray
    dq1: np.ndarray
    dq2: np.ndarray


def limiter_candidates(
    u: Sequence[np.ndarray],
    v_left: np.ndarray,
    v_right: np.ndarray,
    dx: float,
) -> LimiterCandidates:
    um, u0, up = u
    return LimiterCandidates(
        dq0=0.75 * (up - um) / dx - 0.25 * (v_left + v_right),
        dq1=(u0 - um) / dx,
        dq2=(up - u0) / dx,
    )


def limiter_smoothness(
    u: Sequence[np.ndarray],
    v_left: np.ndarray,
    v_right: np.ndarray,
    dx: float,
) -> SmoothnessTriple:
    um, u0, up = u
    a1 = -0.25 * dx * (v_left + v_right) + 0.75 * (up - um)
    a2 = 0.25 * dx * (v_left - v_right) + um - 2.0 * u0 + up
    a3 = 0.25 * dx * (v_left + v_right) + 0.25 * (um - up)
    a4 = 0.25 * dx * (v_right - v_left) - 0.5 * (um - 2.0 * u0 + up)
    beta0 = (
        (a1 + 0.25 * a3) ** 2
        + (13.0 / 3.0) * (a2 + (63.0 / 130.0) * a4) ** 2
        + (781.0 / 20.0) * a3**2
        + (1421461.0 / 2275.0) * a4**2
    )
    beta1 = (u0 - um) ** 2
    beta2 = (u0 - up) ** 2
    return SmoothnessTriple(beta0, beta1, beta2, difference_measure(beta0, beta1, beta2))


def modified_derivative(
    u: Sequence[np.ndarray],
    v: Sequence[np.ndarray],
    dx: float,
    d_weights: Sequence[float],
    epsilon: float,
) -> np.ndarray:
    """The limited derivative at the middle node of the windows (u, v)."""
    v_left, _, v_right = v
    cand = limiter_candidates(u, v_left, v_right, dx)
    weights = nonlinear_weights(limiter_smoothness(u, v_left, v_right, dx), d_weights, epsilon)
    return combine(cand.dq0, cand.dq1, cand.dq2, weights, d_weights)


def _window(arr: np.ndarray, axis: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes (i-1, i, i+1) for every interior i along `axis`, interior on the other axis."""
    ndim = arr.ndim - 1
    views = []
    for offset in (-1, 0, 1):
        index: list = [slice(None)] + [slice(GHOST, -GHOST)] * ndim
        stop = arr.shape[axis + 1] - GHOST + offset
        index[axis + 1] = slice(GHOST + offset, stop)
        views.append(arr[tuple(index)])
    return views[0], views[1], views[2]


def limit_state(state: HermiteState, grid_spacing: Sequence[float], config: SchemeConfig):
    """
    Interior limited derivatives of a ghost-filled state: v along x and, in 2D, w along y.
    Components are limited independently. With the limiter off the interior derivatives are
    returned as they are.
    """
    fields = [state.v] + ([state.w] if state.w is not None else [])
    if config.limiter_mode == LimiterMode.OFF:
        return tuple(interior(f).copy() for f in fields)
    limited = []
    for axis, (deriv, spacing) in enumerate(zip(fields, grid_spacing)):
        limited.append(
            modified_derivative(
                _window(state.u, axis),
                _window(deriv, axis),
                spacing,
                config.d_weights,
                config.epsilon,
            )
        )
    return tuple(limited)
