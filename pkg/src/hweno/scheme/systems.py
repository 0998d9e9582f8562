# Copyright hweno-solver contributors. All Rights Reserved.

"""
Physics of the conservation laws: scalar fluxes and the compressible Euler equations with
their Jacobian-vector products, eigensystems and characteristic projections.

Conserved fields are arrays with the component axis first: (rho, rho*mu, E) in 1D and
(rho, rho*mu, rho*nu, E) in 2D.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

_logger = logging.getLogger(__name__)

ArrayFunction = Callable[[np.ndarray], np.ndarray]


class InadmissibleStateError(ValueError):
    """Error that is raised when a state has nonpositive density or pressure"""

    pass


@dataclass(frozen=True)
class EulerParams:
    gas_gamma: float = 1.4

    def __post_init__(self) -> None:
        if not self.gas_gamma > 1:
            raise ValueError(f"gas_gamma must exceed 1, got {self.gas_gamma}")


@dataclass(frozen=True)
class CharacteristicFrame:
    """Left/right eigenvectors L[a, b, ...], R[a, b, ...] and eigenvalues[a, ...]."""

    left: np.ndarray
    right: np.ndarray
    eigenvalues: np.ndarray


def project(window: Sequence[np.ndarray], frame: Optional[CharacteristicFrame]):
    """w = L q for every node of the window."""
    if frame is None:
        return list(window)
    return [np.einsum("ab...,b...->a...", frame.left, q) for q in window]


def unproject(window: Sequence[np.ndarray], frame: Optional[CharacteristicFrame]):
    """q = R w for every node of the window."""
    if frame is None:
        return list(window)
    return [np.einsum("ab...,b...->a...", frame.right, w) for w in window]


def _momentum_slice(dim: int) -> slice:
    return slice(1, 1 + dim)


def primitive(
    state: np.ndarray,
    params: EulerParams = EulerParams(),
    check: bool = True,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    (rho, velocity[k], p) of conserved Euler states.

    Raises:
        InadmissibleStateError: If `check` and some density or pressure is not positive.
    """
    dim = state.shape[0] - 2
    rho = state[0]
    velocity = state[_momentum_slice(dim)] / rho
    kinetic = 0.5 * np.sum(state[_momentum_slice(dim)] * velocity, axis=0)
    p = (params.gas_gamma - 1.0) * (state[-1] - kinetic)
    if check:
        bad = ~((rho > 0) & (p > 0))
        if np.any(bad):
            index = tuple(int(i) for i in np.argwhere(np.atleast_1d(bad))[0])
            offending = np.atleast_2d(state.T).T[(slice(None),) + index]
            raise InadmissibleStateError(
                f"Inadmissible Euler state {offending.tolist()} at index {index}: "
                f"rho={np.atleast_1d(rho)[index]}, p={np.atleast_1d(p)[index]}"
            )
    return rho, velocity, p


def conserved(
    rho: np.ndarray,
    velocity: Sequence[np.ndarray],
    p: np.ndarray,
    params: EulerParams = EulerParams(),
) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    vel = [np.broadcast_to(np.asarray(c, dtype=float), rho.shape) for c in velocity]
    p = np.broadcast_to(np.asarray(p, dtype=float), rho.shape)
    energy = p / (params.gas_gamma - 1.0) + 0.5 * rho * sum(c * c for c in vel)
    return np.stack([rho] + [rho * c for c in vel] + [energy])


def euler_flux(
    state: np.ndarray, direction: int, params: EulerParams = EulerParams()
) -> np.ndarray:
    """
    Analytic Euler flux along axis `direction`.

    Raises:
        InadmissibleStateError: If a density or pressure is not positive.
    """
    rho, velocity, p = primitive(state, params)
    q = velocity[direction]
    flux = state * q
    flux[1 + direction] += p
    flux[-1] += p * q
    return flux


def euler_jacobian_vector(
    state: np.ndarray,
    dstate: np.ndarray,
    direction: int,
    params: EulerParams = EulerParams(),
) -> np.ndarray:
    """A(state) @ dstate, the derivative of the flux along `dstate`, pointwise."""
    dim = state.shape[0] - 2
    rho, velocity, p = primitive(state, params, check=False)
    drho = dstate[0]
    dvelocity = (dstate[_momentum_slice(dim)] - velocity * drho) / rho
    dp = (params.gas_gamma - 1.0) * (
        dstate[-1]
        - np.sum(velocity * dstate[_momentum_slice(dim)] - 0.5 * velocity**2 * drho, axis=0)
    )
    q = velocity[direction]
    dq = dvelocity[direction]
    out = dstate * q + state * dq
    out[1 + direction] += dp
    out[-1] += dp * q + p * dq
    return out


def sound_speed(rho: np.ndarray, p: np.ndarray, params: EulerParams = EulerParams()) -> np.ndarray:
    return np.sqrt(params.gas_gamma * p / rho)


def characteristic_frame(
    left_state: np.ndarray,
    right_state: np.ndarray,
    direction: int,
    params: EulerParams = EulerParams(),
) -> CharacteristicFrame:
    """
    Eigensystem of the flux Jacobian along `direction` at the arithmetic mean of two
    conserved states (arrays with the component axis first, any trailing shape).

    Raises:
        InadmissibleStateError: If the averaged state is not admissible.
    """
    average = 0.5 * (left_state + right_state)
    dim = average.shape[0] - 2
    rho, velocity, p = primitive(average, params)
    c = sound_speed(rho, p, params)
    enthalpy = (average[-1] + p) / rho
    speed2 = np.sum(velocity**2, axis=0)
    b1 = (params.gas_gamma - 1.0) / c**2
    b2 = 0.5 * b1 * speed2
    one = np.ones_like(rho)
    zero = np.zeros_like(rho)
    q = velocity[direction]

    if dim == 1:
        mu = velocity[0]
        right = np.stack(
            [
                np.stack([one, one, one]),
                np.stack([mu - c, mu, mu + c]),
                np.stack([enthalpy - mu * c, 0.5 * speed2, enthalpy + mu * c]),
            ]
        )
        left = np.stack(
            [
                0.5 * np.stack([b2 + mu / c, -b1 * mu - 1.0 / c, b1]),
                np.stack([1.0 - b2, b1 * mu, -b1]),
                0.5 * np.stack([b2 - mu / c, -b1 * mu + 1.0 / c, b1]),
            ]
        )
        eigenvalues = np.stack([mu - c, mu, mu + c])
        return CharacteristicFrame(left, right, eigenvalues)

    mu, nu = velocity
    nx, ny = (1.0, 0.0) if direction == 0 else (0.0, 1.0)
    tangential = -mu * ny + nu * nx
    right = np.stack(
        [
            np.stack([one, one, zero, one]),
            np.stack([mu - c * nx, mu, -ny * one, mu + c * nx]),
            np.stack([nu - c * ny, nu, nx * one, nu + c * ny]),
            np.stack([enthalpy - q * c, 0.5 * speed2, tangential, enthalpy + q * c]),
        ]
    )
    left = np.stack(
        [
            0.5 * np.stack([b2 + q / c, -b1 * mu - nx / c, -b1 * nu - ny / c, b1]),
            np.stack([1.0 - b2, b1 * mu, b1 * nu, -b1]),
            np.stack([-tangential, -ny * one, nx * one, zero]),
            0.5 * np.stack([b2 - q / c, -b1 * mu + nx / c, -b1 * nu + ny / c, b1]),
        ]
    )
    eigenvalues = np.stack([q - c, q, q, q + c])
    return CharacteristicFrame(left, right, eigenvalues)


class ConservationLaw:
    """
    Base class for the physics a scheme needs: fluxes per axis, Jacobian-vector products,
    wave-speed bounds and characteristic frames.
    """

    name = "law"
    ncomp = 1
    component_names: Tuple[str, ...] = ("u",)

    def flux(self, u: np.ndarray, axis: int) -> np.ndarray:
        raise NotImplementedError

    def jacobian_vector(self, u: np.ndarray, du: np.ndarray, axis: int) -> np.ndarray:
        raise NotImplementedError

    def max_wave_speed(self, u: np.ndarray, axis: int) -> float:
        raise NotImplementedError

    def frame(
        self, left: np.ndarray, right: np.ndarray, axis: int
    ) -> Optional[CharacteristicFrame]:
        return None

    def odd_components(self, axis: int) -> Tuple[int, ...]:
        return ()

    def check_admissible(self, u: np.ndarray) -> None:
        pass


class ScalarLaw(ConservationLaw):
    """
    Scalar law u_t + f(u)_x (+ g(u)_y) = 0 given by flux functions and their derivatives,
    one per axis. `alpha_bound` fixes the splitting speed instead of max |f'(u)| on the data.
    """

    def __init__(
        self,
        name: str,
        fluxes: Sequence[ArrayFunction],
        derivatives: Sequence[ArrayFunction],
        alpha_bound: Optional[float] = None,
    ) -> None:
        self.name = name
        self._fluxes = tuple(fluxes)
        self._derivatives = tuple(derivatives)
        self.alpha_bound = alpha_bound

    def flux(self, u: np.ndarray, axis: int) -> np.ndarray:
        return self._fluxes[axis](u)

    def jacobian_vector(self, u: np.ndarray, du: np.ndarray, axis: int) -> np.ndarray:
        return self._derivatives[axis](u) * du

    def max_wave_speed(self, u: np.ndarray, axis: int) -> float:
        if self.alpha_bound is not None:
            return self.alpha_bound
        return float(np.max(np.abs(self._derivatives[axis](u))))


def burgers_law(dim: int = 1) -> ScalarLaw:
    return ScalarLaw(
        "burgers",
        fluxes=[lambda u: 0.5 * u * u] * dim,
        derivatives=[lambda u: u] * dim,
    )


def buckley_leverett_flux(u: np.ndarray) -> np.ndarray:
    return 4.0 * u * u / (4.0 * u * u + (1.0 - u) ** 2)


def buckley_leverett_derivative(u: np.ndarray) -> np.ndarray:
    denominator = 4.0 * u * u + (1.0 - u) ** 2
    return 8.0 * u * (1.0 - u) / denominator**2


def buckley_leverett_law(samples: int = 100001) -> ScalarLaw:
    """The wave-speed bound is max |f'(u)| over u in [0, 1], found by a dense scan."""
    scan = np.linspace(0.0, 1.0, samples)
    alpha = float(np.max(np.abs(buckley_leverett_derivative(scan))))
    _logger.debug(f"Buckley-Leverett wave-speed bound {alpha:.6f}")
    return ScalarLaw(
        "buckley-leverett",
        fluxes=[buckley_leverett_flux],
        derivatives=[buckley_leverett_derivative],
        alpha_bound=alpha,
    )


class EulerLaw(ConservationLaw):
    def __init__(self, dim: int = 1, params: EulerParams = EulerParams()) -> None:
        if dim not in (1, 2):
            raise ValueError(f"Euler equations are available in 1D and 2D, got dim={dim}")
        self.name = f"euler{dim}d"
        self.dim = dim
        self.params = params
        self.ncomp = dim + 2
        self.component_names = ("rho", "rho_mu", "E") if dim == 1 else (
            "rho",
            "rho_mu",
            "rho_nu",
            "E",
        )

    def flux(self, u: np.ndarray, axis: int) -> np.ndarray:
        return euler_flux(u, axis, self.params)

    def jacobian_vector(self, u: np.ndarray, du: np.ndarray, axis: int) -> np.ndarray:
        return euler_jacobian_vector(u, du, axis, self.params)

    def max_wave_speed(self, u: np.ndarray, axis: int) -> float:
        rho, velocity, p = primitive(u, self.params)
        return float(np.max(np.abs(velocity[axis]) + sound_speed(rho, p, self.params)))

    def frame(self, left: np.ndarray, right: np.ndarray, axis: int) -> CharacteristicFrame:
        return characteristic_frame(left, right, axis, self.params)

    def odd_components(self, axis: int) -> Tuple[int, ...]:
        return (1 + axis,)

    def check_admissible(self, u: np.ndarray) -> None:
        primitive(u, self.params)
