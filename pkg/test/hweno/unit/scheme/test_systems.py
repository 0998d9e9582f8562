# Copyright hweno-solver contributors. All Rights Reserved.

from __future__ import annotations

import numpy as np
import pytest

from hweno.scheme.systems import (
    EulerLaw,
    EulerParams,
    InadmissibleStateError,
    buckley_leverett_derivative,
    buckley_leverett_flux,
    buckley_leverett_law,
    burgers_law,
    characteristic_frame,
    conserved,
    euler_flux,
    euler_jacobian_vector,
    primitive,
    project,
    unproject,
)


def _random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    rho = rng.uniform(0.5, 2.0)
    velocity = [np.array(rng.uniform(-1.0, 1.0)) for _ in range(dim)]
    return conserved(np.array(rho), velocity, np.array(rng.uniform(0.5, 2.0)))


def _jacobian(state: np.ndarray, direction: int) -> np.ndarray:
    n = state.shape[0]
    return np.column_stack(
        [euler_jacobian_vector(state, np.eye(n)[k], direction) for k in range(n)]
    )


class TestEulerFlux:
    @pytest.mark.parametrize(
        "velocity, expected",
        [(0.0, [0.0, 1.0, 0.0]), (1.0, [1.0, 2.0, 4.0])],
    )
    def test_examples(self, velocity: float, expected: list) -> None:
        # GIVEN
        state = conserved(np.array(1.0), [np.array(velocity)], np.array(1.0))

        # WHEN
        flux = euler_flux(state, 0)

        # THEN
        np.testing.assert_allclose(flux, expected, atol=1e-14)

    def test_2d_flux_along_y(self) -> None:
        state = conserved(np.array(2.0), [np.array(1.0), np.array(-0.5)], np.array(1.5))

        flux = euler_flux(state, 1)

        np.testing.assert_allclose(flux, [-1.0, -1.0, 0.5 + 1.5, -0.5 * (float(state[3]) + 1.5)])

    def test_inadmissible_state_is_named(self) -> None:
        # GIVEN
        state = np.array([[1.0, 1.0], [0.0, 0.0], [2.5, -1.0]])

        # WHEN
        with pytest.raises(InadmissibleStateError) as exc_info:
            euler_flux(state, 0)

        # THEN
        assert "index (1,)" in str(exc_info.value)
        assert "[1.0, 0.0, -1.0]" in str(exc_info.value)

    def test_primitive_round_trip(self) -> None:
        rho, velocity, p = primitive(conserved(np.array(1.2), [np.array(0.3)], np.array(0.7)))

        assert (float(rho), float(velocity[0]), float(p)) == pytest.approx((1.2, 0.3, 0.7))

    @pytest.mark.parametrize("dim, direction", [(1, 0), (2, 0), (2, 1)])
    def test_jacobian_matches_finite_differences(self, dim: int, direction: int) -> None:
        # GIVEN
        rng = np.random.default_rng(10 * dim + direction)
        state = _random_state(rng, dim)
        dstate = rng.normal(size=state.shape)
        step = 1e-6

        # WHEN
        product = euler_jacobian_vector(state, dstate, direction)

        # THEN
        forward = euler_flux(state + step * dstate, direction)
        backward = euler_flux(state - step * dstate, direction)
        np.testing.assert_allclose(product, (forward - backward) / (2 * step), atol=1e-6)


class TestCharacteristicFrame:
    @pytest.mark.parametrize("dim, direction", [(1, 0), (2, 0), (2, 1)])
    @pytest.mark.parametrize("seed", range(4))
    def test_eigen_identities(self, dim: int, direction: int, seed: int) -> None:
        # GIVEN
        rng = np.random.default_rng(seed)
        left, right = _random_state(rng, dim), _random_state(rng, dim)
        average = 0.5 * (left + right)

        # WHEN
        frame = characteristic_frame(left, right, direction)

        # THEN
        n = dim + 2
        np.testing.assert_allclose(frame.left @ frame.right, np.eye(n), atol=1e-12)
        rebuilt = frame.right @ np.diag(frame.eigenvalues) @ frame.left
        np.testing.assert_allclose(rebuilt, _jacobian(average, direction), atol=1e-10)

    def test_eigenvalue_order(self) -> None:
        left = conserved(np.array(1.0), [np.array(0.0)], np.array(1.0))
        right = conserved(np.array(0.125), [np.array(0.0)], np.array(0.1))

        eigenvalues = characteristic_frame(left, right, 0).eigenvalues

        assert eigenvalues[0] < eigenvalues[1] < eigenvalues[2]

    def test_frame_on_grid_lines(self) -> None:
        # GIVEN
        rng = np.random.default_rng(5)
        states = np.stack([_random_state(rng, 2) for _ in range(6)], axis=-1)
        frame = characteristic_frame(states[:, :-1], states[:, 1:], 0)
        window = [rng.normal(size=(4, 5)) for _ in range(3)]

        # WHEN
        back = unproject(project(window, frame), frame)

        # THEN
        assert frame.left.shape == (4, 4, 5)
        for original, restored in zip(window, back):
            np.testing.assert_allclose(restored, original, atol=1e-12)

    def test_identity_frame(self) -> None:
        window = [np.arange(3.0)]

        assert project(window, None)[0] is window[0]
        assert unproject(window, None)[0] is window[0]

    def test_projection_is_linear(self) -> None:
        rng = np.random.default_rng(8)
        state = _random_state(rng, 1)
        frame = characteristic_frame(state, state, 0)
        a, b = rng.normal(size=3), rng.normal(size=3)

        (combined,) = project([2.0 * a - 3.0 * b], frame)
        pa, pb = project([a, b], frame)

        np.testing.assert_allclose(combined, 2.0 * pa - 3.0 * pb, atol=1e-12)

    def test_inadmissible_average(self) -> None:
        bad = np.array([1.0, 0.0, -1.0])

        with pytest.raises(InadmissibleStateError):
            characteristic_frame(bad, bad, 0)


class TestLaws:
    def test_burgers(self) -> None:
        law = burgers_law(2)
        u = np.array([-3.0, 1.0, 2.0])

        np.testing.assert_allclose(law.flux(u, 1), [4.5, 0.5, 2.0])
        np.testing.assert_allclose(law.jacobian_vector(u, np.ones(3), 0), u)
        assert law.max_wave_speed(u, 0) == 3.0
        assert law.frame(u, u, 0) is None

    def test_buckley_leverett_derivative(self) -> None:
        u = np.linspace(0.05, 0.95, 19)
        step = 1e-6

        numeric = (buckley_leverett_flux(u + step) - buckley_leverett_flux(u - step)) / (2 * step)

        np.testing.assert_allclose(buckley_leverett_derivative(u), numeric, rtol=1e-7)

    def test_buckley_leverett_bound(self) -> None:
        law = buckley_leverett_law()
        scan = np.linspace(0.0, 1.0, 4001)

        assert law.max_wave_speed(np.zeros(4), 0) == law.alpha_bound
        assert law.alpha_bound == pytest.approx(
            float(np.max(buckley_leverett_derivative(scan))), rel=1e-4
        )

    def test_euler_law(self) -> None:
        law = EulerLaw(2, EulerParams(gas_gamma=1.4))
        state = conserved(np.array([1.0, 1.0]), [np.array([0.5, -2.0]), np.zeros(2)], 1.4)

        assert law.ncomp == 4
        assert law.component_names == ("rho", "rho_mu", "rho_nu", "E")
        assert law.odd_components(1) == (2,)
        assert law.max_wave_speed(state, 0) == pytest.approx(2.0 + 1.4)

    def test_euler_dimension(self) -> None:
        with pytest.raises(ValueError):
            EulerLaw(3)

    def test_gas_gamma(self) -> None:
        with pytest.raises(ValueError):
            EulerParams(gas_gamma=1.0)
