# Copyright hweno-solver contributors. All Rights Reserved.

"""
Classical fifth-order finite difference WENO reconstruction (Jiang and Shu), used as the
comparison scheme and to produce reference solutions.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

# These optimal weights give the fifth-order upwind interface value on smooth data.
LINEAR_WEIGHTS = (0.1, 0.6, 0.3)
EPSILON = 1e-6


def smoothness_indicators(window: Sequence[np.ndarray]):
    f0, f1, f2, f3, f4 = window
    return (
        (13.0 / 12.0) * (f0 - 2.0 * f1 + f2) ** 2 + 0.25 * (f0 - 4.0 * f1 + 3.0 * f2) ** 2,
        (13.0 / 12.0) * (f1 - 2.0 * f2 + f3) ** 2 + 0.25 * (f1 - f3) ** 2,
        (13.0 / 12.0) * (f2 - 2.0 * f3 + f4) ** 2 + 0.25 * (3.0 * f2 - 4.0 * f3 + f4) ** 2,
    )


def weno5_weights(window: Sequence[np.ndarray], epsilon: float = EPSILON):
    alphas = [d / (epsilon + b) ** 2 for d, b in zip(LINEAR_WEIGHTS, smoothness_indicators(window))]
    total = alphas[0] + alphas[1] + alphas[2]
    return alphas[0] / total, alphas[1] / total, alphas[2] / total


def weno5_reconstruct(window: Sequence[np.ndarray], epsilon: float = EPSILON) -> np.ndarray:
    """
    Interface value at x_{i+1/2} from the upwind window (i-2, ..., i+2). For the downwind
    part pass the window (i+3, ..., i-1).
    """
    f0, f1, f2, f3, f4 = window
    q0 = (2.0 * f0 - 7.0 * f1 + 11.0 * f2) / 6.0
    q1 = (-f1 + 5.0 * f2 + 2.0 * f3) / 6.0
    q2 = (2.0 * f2 + 5.0 * f3 - f4) / 6.0
    w0, w1, w2 = weno5_weights(window, epsilon)
    return w0 * q0 + w1 * q1 + w2 * q2
