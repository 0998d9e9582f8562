# Copyright hweno-solver contributors. All Rights Reserved.

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hweno.bench.problems import Problem, make_problem
from hweno.scheme.core import (
    GHOST,
    BoundaryCondition,
    Grid1D,
    Grid2D,
    HermiteState,
    LimiterMode,
    NonFiniteStateError,
    SchemeConfig,
    axes_of,
    compute_dt,
    interior,
)
from hweno.scheme.limiter import limit_state
from hweno.scheme.solver import (
    fill_ghosts,
    mixed_flux,
    residual,
    residual_1d,
    residual_2d,
    rk3_stages,
    rk3_step,
)
from hweno.scheme.systems import ScalarLaw, burgers_law, conserved

finite = st.floats(min_value=-100.0, max_value=100.0, allow_nan=False, allow_infinity=False)


def _flat_problem() -> Problem:
    """2D Burgers on a periodic box; the tests build their own states."""
    return Problem(
        "flat",
        burgers_law(2),
        (0.0, 2.0, 0.0, 1.0),
        BoundaryCondition.periodic(2),
        1.0,
        lambda grid: (np.zeros((1,) + grid.shape), np.zeros((1,) + grid.shape), None),
    )


def _advection_problem(ndim: int, final_time: float = 0.2) -> Problem:
    """u_t + u_x (+ u_y) = 0 carrying sin(pi (x + y)) around a periodic box."""
    law = ScalarLaw("advection", [lambda u: 1.0 * u] * ndim, [np.ones_like] * ndim)

    def initial(grid):
        if ndim == 1:
            x = grid.centers
            return np.sin(np.pi * x)[None], (np.pi * np.cos(np.pi * x))[None], None
        x, y = grid.mesh()
        du = (np.pi * np.cos(np.pi * (x + y)))[None]
        return np.sin(np.pi * (x + y))[None], du, du.copy()

    bc = BoundaryCondition.periodic(ndim)
    return Problem("advection", law, (0.0, 2.0) * ndim, bc, final_time, initial, smooth=True)


def _orders(errors: list) -> np.ndarray:
    return np.log2(np.asarray(errors[:-1]) / np.asarray(errors[1:]))


def _constant_state(problem: Problem, grid, values) -> HermiteState:
    column = np.asarray(values, dtype=float).reshape((-1,) + (1,) * grid.ndim)
    u = np.broadcast_to(column, (len(values),) + grid.shape).copy()
    w = np.zeros_like(u) if grid.ndim == 2 else None
    return fill_ghosts(HermiteState.from_interior(u, np.zeros_like(u), w), grid, problem, 0.0)


def _tanh_state(grid: Grid1D, width: float) -> HermiteState:
    x = grid.centers
    u = 0.5 + 0.5 * np.tanh((x - 1.0) / width)
    v = 0.5 / width / np.cosh((x - 1.0) / width) ** 2
    return HermiteState.from_interior(u[None], v[None])


class TestMixedFlux:
    def test_constant(self) -> None:
        assert mixed_flux([2.5] * 4) == pytest.approx(2.5)

    def test_linear(self) -> None:
        assert mixed_flux([-1.0, 0.0, 1.0, 2.0]) == pytest.approx(0.5)

    @settings(derandomize=True, max_examples=200)
    @given(a=finite, b=finite)
    def test_affine_data_gives_the_midpoint(self, a: float, b: float) -> None:
        values = [a + b * k for k in (-1, 0, 1, 2)]

        assert mixed_flux(values) == pytest.approx(a + 0.5 * b, abs=1e-9)


class TestResidual:
    @pytest.mark.parametrize(
        "name, values",
        [
            ("burgers1d-smooth", [0.7]),
            ("euler1d-smooth", list(conserved(np.array(1.0), [np.array(0.5)], np.array(1.0)))),
            (
                "euler2d-smooth",
                list(conserved(np.array(1.0), [np.array(0.5), np.array(-0.2)], np.array(1.0))),
            ),
        ],
    )
    def test_constant_state_is_steady(self, name: str, values: list) -> None:
        # GIVEN
        problem = make_problem(name)
        grid = problem.make_grid(10)
        state = _constant_state(problem, grid, values)

        # WHEN
        res = residual(state, grid, problem, SchemeConfig())

        # THEN
        np.testing.assert_allclose(res.du, 0.0, atol=1e-11)
        np.testing.assert_allclose(res.dv, 0.0, atol=1e-9)
        if res.dw is not None:
            np.testing.assert_allclose(res.dw, 0.0, atol=1e-9)

    @pytest.mark.parametrize("scheme", ["l-hweno", "weno-js"])
    def test_periodic_residual_conserves(self, scheme: str) -> None:
        # GIVEN
        problem = make_problem("burgers1d-smooth")
        grid = problem.make_grid(20)
        state = fill_ghosts(problem.initial_state(grid), grid, problem, 0.0)

        # WHEN
        res = residual(state, grid, problem, SchemeConfig(scheme=scheme))

        # THEN
        assert float(np.sum(res.du)) * grid.dx == pytest.approx(0.0, abs=1e-12)
        assert float(np.sum(res.dv)) * grid.dx == pytest.approx(0.0, abs=1e-10)

    def test_y_constant_field_matches_the_1d_residual(self) -> None:
        # GIVEN
        problem_2d = _flat_problem()
        problem_1d = make_problem("burgers1d-smooth")
        grid_2d = Grid2D.from_extents(0.0, 2.0, 20, 0.0, 1.0, 8)
        grid_1d = Grid1D(0.0, 2.0, 20)
        x = grid_1d.centers
        u, v = 0.5 + np.sin(np.pi * x), np.pi * np.cos(np.pi * x)
        state_1d = fill_ghosts(HermiteState.from_interior(u[None], v[None]), grid_1d, problem_1d, 0)
        u2 = np.repeat(u[None, :, None], 8, axis=2)
        v2 = np.repeat(v[None, :, None], 8, axis=2)
        state_2d = fill_ghosts(
            HermiteState.from_interior(u2, v2, np.zeros_like(u2)), grid_2d, problem_2d, 0.0
        )
        alpha = float(np.max(np.abs(u)))

        # WHEN
        res_1d = residual_1d(state_1d, grid_1d, problem_1d, SchemeConfig(), (alpha,))
        res_2d = residual_2d(state_2d, grid_2d, problem_2d, SchemeConfig(), (alpha, alpha))

        # THEN
        assert res_2d.dw is not None
        for j in range(8):
            np.testing.assert_allclose(res_2d.du[0, :, j], res_1d.du[0], rtol=1e-12, atol=1e-12)
            np.testing.assert_allclose(res_2d.dv[0, :, j], res_1d.dv[0], rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(res_2d.dw, 0.0, atol=1e-10)

    def test_2d_residual_needs_w(self) -> None:
        grid = Grid2D.from_extents(0.0, 2.0, 8, 0.0, 1.0, 8)
        state = HermiteState.from_interior(np.ones((1, 8, 8)), np.zeros((1, 8, 8)))

        with pytest.raises(ValueError) as exc_info:
            residual_2d(state, grid, _flat_problem(), SchemeConfig())

        assert "w" in str(exc_info.value)

    def test_solid_cells_have_zero_residual(self) -> None:
        # GIVEN
        problem = make_problem("forward-step")
        grid = problem.make_grid(30, 10)
        state = fill_ghosts(problem.initial_state(grid), grid, problem, 0.0)
        mask = problem.solid_mask(grid)
        assert mask is not None

        # WHEN
        res = residual(state, grid, problem, SchemeConfig())

        # THEN
        assert res.dw is not None
        for arr in (res.du, res.dv, res.dw):
            assert np.all(arr[:, mask] == 0.0)
            assert np.all(np.isfinite(arr))

    def test_non_finite_flux_is_reported(self) -> None:
        # GIVEN
        problem = make_problem("burgers1d-smooth")
        grid = problem.make_grid(10)
        state = fill_ghosts(problem.initial_state(grid), grid, problem, 0.0)
        state.u[0, GHOST + 4] = np.nan

        # WHEN / THEN
        with pytest.raises(NonFiniteStateError):
            residual(state, grid, problem, SchemeConfig(), (1.5,))


class TestRk3Step:
    def test_constant_state_is_kept(self) -> None:
        # GIVEN
        problem = make_problem("burgers1d-smooth")
        grid = problem.make_grid(12)
        state = _constant_state(problem, grid, [0.7])

        # WHEN
        out = rk3_step(state, 0.01, grid, problem, SchemeConfig())

        # THEN
        np.testing.assert_allclose(interior(out.u), 0.7, rtol=1e-13)
        np.testing.assert_allclose(interior(out.v), 0.0, atol=1e-9)

    @pytest.mark.parametrize("mode", list(LimiterMode))
    def test_mean_is_conserved(self, mode: LimiterMode) -> None:
        # GIVEN
        problem = make_problem("burgers1d-smooth")
        grid = problem.make_grid(40)
        config = SchemeConfig(limiter_mode=mode)
        state = problem.initial_state(grid)
        dt = compute_dt(fill_ghosts(state.copy(), grid, problem, 0.0), grid, config.cfl, problem)

        # WHEN
        out = rk3_step(state, dt, grid, problem, config)

        # THEN
        assert float(np.mean(interior(out.u))) == pytest.approx(
            float(np.mean(interior(state.u))), abs=1e-13
        )

    def test_weno_js_leaves_derivatives_alone(self) -> None:
        # GIVEN
        problem = make_problem("burgers1d-smooth")
        grid = problem.make_grid(20)
        state = problem.initial_state(grid)

        # WHEN
        out = rk3_step(state, 0.01, grid, problem, SchemeConfig(scheme="weno-js"))

        # THEN
        np.testing.assert_allclose(interior(out.v), interior(state.v), rtol=1e-14, atol=1e-14)
        assert not np.allclose(interior(out.u), interior(state.u))

    def test_limiter_barely_touches_smooth_data(self) -> None:
        # GIVEN
        problem = make_problem("burgers1d-smooth")
        grid = problem.make_grid(40)
        state = problem.initial_state(grid)

        # WHEN
        staged = rk3_step(state, 0.01, grid, problem, SchemeConfig())
        plain = rk3_step(state, 0.01, grid, problem, SchemeConfig(limiter_mode="off"))

        # THEN
        assert float(np.max(np.abs(interior(staged.u) - interior(plain.u)))) < 1e-3

    def test_limiter_acts_on_a_steep_front(self) -> None:
        # GIVEN
        problem = make_problem("burgers1d-smooth")
        grid = problem.make_grid(40)
        state = _tanh_state(grid, 0.02)

        # WHEN
        staged = rk3_step(state, 0.01, grid, problem, SchemeConfig())
        plain = rk3_step(state, 0.01, grid, problem, SchemeConfig(limiter_mode="off"))

        # THEN
        assert float(np.max(np.abs(interior(staged.v) - interior(plain.v)))) > 1e-3

    def test_non_finite_state_raises(self) -> None:
        # GIVEN
        problem = make_problem("burgers1d-smooth")
        grid = problem.make_grid(10)
        state = problem.initial_state(grid)
        state.u[0, GHOST + 2] = np.inf

        # WHEN / THEN
        with pytest.raises(NonFiniteStateError):
            rk3_step(state, 0.01, grid, problem, SchemeConfig())

    def test_input_state_is_not_modified(self) -> None:
        problem = make_problem("burgers1d-smooth")
        grid = problem.make_grid(10)
        state = problem.initial_state(grid)
        before = state.copy()

        rk3_step(state, 0.01, grid, problem, SchemeConfig())

        np.testing.assert_array_equal(state.u, before.u)
        np.testing.assert_array_equal(state.v, before.v)


class TestStageLimiting:
    dt = 0.01
    alphas = (1.0,)

    def _front(self):
        problem = make_problem("burgers1d-smooth")
        grid = problem.make_grid(40)
        state = fill_ghosts(_tanh_state(grid, 0.02), grid, problem, 0.0)
        return problem, grid, state

    def test_first_stage_advances_the_limited_derivative(self) -> None:
        # GIVEN
        problem, grid, state = self._front()
        config = SchemeConfig()
        (lim0,) = limit_state(state, (grid.dx,), config)
        res0 = residual(state, grid, problem, config, self.alphas)

        # WHEN
        stage1, _, _ = rk3_stages(state, self.dt, grid, problem, config, 0.0, self.alphas)

        # THEN
        assert not np.allclose(lim0, interior(state.v))
        np.testing.assert_array_equal(interior(stage1.v), lim0 + self.dt * res0.dv)

    def test_second_stage_combines_limited_derivatives(self) -> None:
        # GIVEN
        problem, grid, state = self._front()
        config = SchemeConfig()
        (lim0,) = limit_state(state, (grid.dx,), config)

        # WHEN
        stage1, stage2, _ = rk3_stages(state, self.dt, grid, problem, config, 0.0, self.alphas)

        # THEN
        (lim1,) = limit_state(stage1, (grid.dx,), config)
        res1 = residual(stage1, grid, problem, config, self.alphas)
        expected = 0.75 * lim0 + 0.25 * (lim1 + self.dt * res1.dv)
        np.testing.assert_array_equal(interior(stage2.v), expected)

    def test_first_stage_values_ignore_the_limiter(self) -> None:
        # GIVEN
        problem, grid, state = self._front()

        # WHEN
        staged, _, _ = rk3_stages(state, self.dt, grid, problem, SchemeConfig(), 0.0, self.alphas)
        plain, _, _ = rk3_stages(
            state, self.dt, grid, problem, SchemeConfig(limiter_mode="off"), 0.0, self.alphas
        )

        # THEN
        np.testing.assert_array_equal(interior(staged.u), interior(plain.u))
        assert not np.allclose(interior(staged.v), interior(plain.v))

    @pytest.mark.parametrize("name", ["burgers1d-smooth", "euler2d-smooth"])
    def test_residual_sees_the_raw_derivatives(self, name: str) -> None:
        # GIVEN
        problem = make_problem(name)
        grid = problem.make_grid(12)
        state = fill_ghosts(problem.initial_state(grid), grid, problem, 0.0)
        spacing = tuple(a.dx for a in axes_of(grid))
        residual_of = residual_1d if grid.ndim == 1 else residual_2d
        before = residual_of(state, grid, problem, SchemeConfig())

        # WHEN
        limit_state(state, spacing, SchemeConfig())
        after = residual_of(state, grid, problem, SchemeConfig())
        unlimited = residual_of(state, grid, problem, SchemeConfig(limiter_mode="off"))

        # THEN
        for res in (after, unlimited):
            np.testing.assert_array_equal(res.du, before.du)
            np.testing.assert_array_equal(res.dv, before.dv)
            if before.dw is not None:
                np.testing.assert_array_equal(res.dw, before.dw)


class TestResidualAccuracy:
    def test_1d_operators_on_a_sine(self) -> None:
        # GIVEN
        problem = _advection_problem(1)
        du_errors, dv_errors = [], []

        for nx in (40, 80, 160):
            grid = problem.make_grid(nx)
            state = fill_ghosts(problem.initial_state(grid), grid, problem, 0.0)
            x = grid.centers

            # WHEN
            res = residual_1d(state, grid, problem, SchemeConfig())

            du_errors.append(float(np.mean(np.abs(res.du[0] + np.pi * np.cos(np.pi * x)))))
            dv_errors.append(float(np.mean(np.abs(res.dv[0] - np.pi**2 * np.sin(np.pi * x)))))

        # THEN
        assert _orders(du_errors)[-1] >= 4.5, du_errors
        assert _orders(dv_errors)[-1] >= 3.7, dv_errors

    def test_2d_operators_on_a_diagonal_sine(self) -> None:
        # GIVEN
        problem = _advection_problem(2)
        errors: dict = {"du": [], "dv": [], "dw": []}

        for nx in (20, 40, 80):
            grid = problem.make_grid(nx)
            state = fill_ghosts(problem.initial_state(grid), grid, problem, 0.0)
            x, y = grid.mesh()
            phase = np.pi * (x + y)

            # WHEN
            res = residual_2d(state, grid, problem, SchemeConfig())

            assert res.dw is not None
            errors["du"].append(float(np.mean(np.abs(res.du[0] + 2.0 * np.pi * np.cos(phase)))))
            for key, value in (("dv", res.dv), ("dw", res.dw)):
                exact = 2.0 * np.pi**2 * np.sin(phase)
                errors[key].append(float(np.mean(np.abs(value[0] - exact))))

        # THEN
        assert _orders(errors["du"])[-1] >= 4.5, errors
        assert _orders(errors["dv"])[-1] >= 3.7, errors
        assert _orders(errors["dw"])[-1] >= 3.7, errors


class TestRk3Accuracy:
    @staticmethod
    def _advect(problem: Problem, nx: int, config: SchemeConfig) -> float:
        grid = problem.make_grid(nx)
        state, t = problem.initial_state(grid), 0.0
        while t < problem.final_time:
            dt = compute_dt(state, grid, config.cfl, problem, t, accuracy=True)
            state = rk3_step(state, dt, grid, problem, config, t)
            t += dt
        exact = np.sin(np.pi * (grid.centers - t))
        return float(np.mean(np.abs(interior(state.u)[0] - exact)))

    def test_fifth_order_in_accuracy_mode(self) -> None:
        # GIVEN
        problem = _advection_problem(1, final_time=0.2)
        config = SchemeConfig(time_step="accuracy")

        # WHEN
        errors = [self._advect(problem, nx, config) for nx in (40, 80, 160)]

        # THEN
        assert _orders(errors)[-1] >= 4.5, errors
