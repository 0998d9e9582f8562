# Copyright hweno-solver contributors. All Rights Reserved.

"""
Fifth-order Hermite WENO interface fluxes built from a three-point stencil.

Every kernel takes windows as sequences of three node values (i-1, i, i+1). Each node value
may be a scalar or an array, so the same code runs on single interfaces, whole grid lines
and characteristic variables.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .core import SchemeConfig
from .systems import CharacteristicFrame, project, unproject

Window = Sequence[np.ndarray]


@dataclass(frozen=True)
class SplitFluxPair:
    plus: np.ndarray
    minus: np.ndarray


@dataclass(frozen=True)
class CandidateSet:
    """Interface values of the quintic p0, the quadratics p1 and p2, and p0'."""

    p0: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    dp0: np.ndarray


@dataclass(frozen=True)
class SmoothnessTriple:
    beta0: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray
    tau: np.ndarray


def split_flux_lf(f: np.ndarray, u: np.ndarray, alpha: float) -> SplitFluxPair:
    """
    Global Lax-Friedrichs splitting f = f+ + f-, f+- = (f +- alpha u) / 2. The same formula
    splits the derivative flux h with the derivative v in place of u.
    """
    if alpha < 0:
        raise ValueError(f"The splitting speed must be nonnegative, got {alpha}")
    return SplitFluxPair(0.5 * (f + alpha * u), 0.5 * (f - alpha * u))


def candidate_point_values(f: Window, h: Window, dx: float) -> CandidateSet:
    fm, f0, fp = f
    hm, h0, hp = h
    p0 = (
        (11.0 / 60.0) * fm
        + (19.0 / 30.0) * f0
        + (11.0 / 60.0) * fp
        + (dx / 20.0) * (hm + 10.0 * h0 - hp)
    )
    p1 = fm / 6.0 + (5.0 / 6.0) * f0 + (2.0 / 3.0) * dx * h0
    p2 = (5.0 / 6.0) * f0 + fp / 6.0 + (1.0 / 3.0) * dx * h0
    dp0 = (fm - 8.0 * f0 + 7.0 * fp) / (4.0 * dx) + (hm - 2.0 * h0 - 5.0 * hp) / 12.0
    return CandidateSet(p0, p1, p2, dp0)


def difference_measure(beta0: np.ndarray, beta1: np.ndarray, beta2: np.ndarray) -> np.ndarray:
    """tau = (|beta0 - beta1| + |beta0 - beta2|)^2 / 4"""
    return 0.25 * (np.abs(beta0 - beta1) + np.abs(beta0 - beta2)) ** 2


def flux_smoothness(
    f: Window,
    h: Window,
    dx: float,
    printed_beta2: bool = False,
) -> SmoothnessTriple:
    """
    Smoothness indicators of the three candidates on the target cell.

    beta2 integrates the quadratic through (f_i, f_i+1, h_i); `printed_beta2` switches to the
    form with f_i - f_i-1 inside the bracket, which does not match that integral and is only
    kept for comparison runs.
    """
    fm, f0, fp = f
    hm, h0, hp = h
    a1 = dx * ((19.0 / 192.0) * hm + (79.0 / 48.0) * h0 + (19.0 / 192.0) * hp) + (
        27.0 / 64.0
    ) * (fm - fp)
    a2 = dx * (0.375 * hm - 0.375 * hp) + 1.25 * (fm - 2.0 * f0 + fp)
    a3 = -dx * ((11.0 / 24.0) * hm + (17.0 / 6.0) * h0 + (11.0 / 24.0) * hp) + 1.875 * (fp - fm)
    a4 = dx * (0.25 * hp - 0.25 * hm) - 0.5 * (fm - 2.0 * f0 + fp)
    a5 = dx * (0.25 * hm + h0 + 0.25 * hp) + 0.75 * (fm - fp)

    beta0 = (
        (a1 + 0.25 * a3 + a5 / 16.0) ** 2
        + (13.0 / 3.0) * (a2 + (63.0 / 130.0) * a4) ** 2
        + (781.0 / 20.0) * (a3 + (8825.0 / 10934.0) * a5) ** 2
        + (1421461.0 / 2275.0) * a4**2
        + (21520059541.0 / 1377684.0) * a5**2
    )
    slope = (dx * h0) ** 2
    beta1 = slope + (13.0 / 3.0) * (dx * h0 - f0 + fm) ** 2
    if printed_beta2:
        beta2 = slope + (13.0 / 3.0) * (dx * h0 + f0 - fm) ** 2
    else:
        beta2 = slope + (13.0 / 3.0) * (dx * h0 - fp + f0) ** 2
    return SmoothnessTriple(beta0, beta1, beta2, difference_measure(beta0, beta1, beta2))


def nonlinear_weights(
    beta: SmoothnessTriple,
    gamma: Sequence[float],
    epsilon: float,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """omega_l = gamma_l (1 + tau / (beta_l + eps)), normalized to sum to one."""
    bars = [
        g * (1.0 + beta.tau / (b + epsilon))
        for g, b in zip(gamma, (beta.beta0, beta.beta1, beta.beta2))
    ]
    total = bars[0] + bars[1] + bars[2]
    return bars[0] / total, bars[1] / total, bars[2] / total


def combine(
    high: np.ndarray,
    low1: np.ndarray,
    low2: np.ndarray,
    weights: Tuple[np.ndarray, np.ndarray, np.ndarray],
    linear: Sequence[float],
) -> np.ndarray:
    """
    w0 (high/g0 - g1/g0 low1 - g2/g0 low2) + w1 low1 + w2 low2; reduces to `high` when the
    nonlinear weights equal the linear ones.
    """
    g0, g1, g2 = linear
    w0, w1, w2 = weights
    return w0 * (high / g0 - (g1 / g0) * low1 - (g2 / g0) * low2) + w1 * low1 + w2 * low2


def reconstruct_plus(
    f: Window,
    h: Window,
    dx: float,
    config: SchemeConfig,
) -> Tuple[np.ndarray, np.ndarray]:
    """Upwind (plus) interface values at x_{i+1/2} from nodes i-1, i, i+1."""
    cand = candidate_point_values(f, h, dx)
    weights = nonlinear_weights(flux_smoothness(f, h, dx), config.gamma_weights, config.epsilon)
    return combine(cand.p0, cand.p1, cand.p2, weights, config.gamma_weights), cand.dp0


def reconstruct_minus(
    f: Window,
    h: Window,
    dx: float,
    config: SchemeConfig,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Downwind (minus) interface values at x_{i+1/2} from nodes i, i+1, i+2, passed in that
    order. Reflecting about the interface reverses the nodes and flips the sign of derivative
    data, and the reconstructed derivative flips back.
    """
    f_value, dh = reconstruct_plus((f[2], f[1], f[0]), (-h[2], -h[1], -h[0]), dx, config)
    return f_value, -dh


def reconstruct_interface(
    f_split: Sequence[SplitFluxPair],
    h_split: Sequence[SplitFluxPair],
    dx: float,
    config: SchemeConfig,
    frame: Optional[CharacteristicFrame] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Numerical fluxes (f_hat, h_hat) at x_{i+1/2} from split data on the nodes i-1 .. i+2.
    f_hat is the weighted HWENO combination, taken in characteristic variables when a frame
    is given; h_hat is the linear quintic derivative.
    """
    f_plus, _ = reconstruct_plus(
        project([s.plus for s in f_split[:3]], frame),
        project([s.plus for s in h_split[:3]], frame),
        dx,
        config,
    )
    f_minus, _ = reconstruct_minus(
        project([s.minus for s in f_split[1:]], frame),
        project([s.minus for s in h_split[1:]], frame),
        dx,
        config,
    )
    f_hat = unproject([f_plus + f_minus], frame)[0]
    return f_hat, derivative_flux(f_split, h_split, dx)


def derivative_flux(
    f_split: Sequence[SplitFluxPair],
    h_split: Sequence[SplitFluxPair],
    dx: float,
) -> np.ndarray:
    """
    The linear derivative flux h_hat at x_{i+1/2} from split data on the nodes i-1 .. i+2.
    Being linear it commutes with any characteristic projection, so systems use it
    component by component.
    """
    plus = candidate_point_values(
        [s.plus for s in f_split[:3]], [s.plus for s in h_split[:3]], dx
    ).dp0
    minus = candidate_point_values(
        [f_split[3].minus, f_split[2].minus, f_split[1].minus],
        [-h_split[3].minus, -h_split[2].minus, -h_split[1].minus],
        dx,
    ).dp0
    return plus - minus
