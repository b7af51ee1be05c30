import numpy as np
import pytest

from dgader.dg import DGSolution
from dgader.errors import InadmissibleStateError
from dgader.laws import advection_law, euler_law
from dgader.timestepping import (
    EULER, HEUN, RK4, SSP3, SSP_3, SSP_EE, SSP_HEUN, SSP_SCHEMES, ButcherTableau, SSPScheme,
    ader_geometry_factor, cfl_geometry_factor, compute_dt, rk_step, ssp_step)

from conftest import make_operator, make_solution


def decay(t, y):
    return -y


def growth(t, y):
    return y


@pytest.mark.parametrize("tab", [EULER, HEUN, SSP3, RK4])
def test_stationary_rhs(tab):
    y = np.array([1.0, -2.0, 3.5])
    np.testing.assert_array_equal(rk_step(lambda t, y: np.zeros_like(y), y, 0.3, tab), y)


def test_rk_examples():
    assert rk_step(decay, np.array([1.0]), 0.1, EULER)[0] == pytest.approx(0.9, abs=1e-16)
    y = rk_step(growth, np.array([1.0]), 0.1, RK4)[0]
    taylor = 1 + 0.1 + 0.01 / 2 + 0.001 / 6 + 0.0001 / 24
    assert y == pytest.approx(taylor, abs=1e-15)
    assert y == pytest.approx(1.105170833333333, abs=1e-15)


def test_heun_example():
    assert ssp_step(decay, np.array([1.0]), 0.1, SSP_HEUN)[0] == pytest.approx(0.905, abs=1e-15)
    assert rk_step(decay, np.array([1.0]), 0.1, HEUN)[0] == pytest.approx(0.905, abs=1e-15)


def nonlinear_rhs(t, y):
    return np.sin(y) * y - 0.3 * y**2


def test_heun_is_average_of_two_euler_steps(rng):
    dt = 0.07
    for _ in range(100):
        y = rng.normal(size=7)

        def ee(v):
            return v + dt * nonlinear_rhs(0.0, v)
        expected = 0.5 * y + 0.5 * ee(ee(y))
        out = ssp_step(nonlinear_rhs, y, dt, SSP_HEUN)
        assert np.max(np.abs(out - expected)) <= 1e-15 * np.max(np.abs(expected))


@pytest.mark.parametrize("scheme, tab", [(SSP_EE, EULER), (SSP_HEUN, HEUN), (SSP_3, SSP3)])
def test_shu_osher_and_butcher_forms_agree(scheme, tab, rng):
    for _ in range(20):
        y = rng.normal(size=5)
        a = ssp_step(nonlinear_rhs, y, 0.05, scheme)
        b = rk_step(nonlinear_rhs, y, 0.05, tab)
        np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("name, stepper, expected, tol", [
    ("ee", lambda y, dt: rk_step(decay, y, dt, EULER), 1.0, 0.1),
    ("heun", lambda y, dt: ssp_step(decay, y, dt, SSP_HEUN), 2.0, 0.1),
    ("ssp3", lambda y, dt: ssp_step(decay, y, dt, SSP_3), 3.0, 0.1),
    ("rk4", lambda y, dt: rk_step(decay, y, dt, RK4), 4.0, 0.15),
])
def test_convergence_orders(name, stepper, expected, tol):
    errs = []
    for dt in (0.1, 0.05, 0.025):
        y = np.array([1.0])
        for _ in range(int(round(1 / dt))):
            y = stepper(y, dt)
        errs.append(abs(y[0] - np.exp(-1.0)))
    slopes = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.abs(slopes - expected) <= tol), slopes


def test_ssp3_local_error_is_fourth_order():
    lam = -1.3
    errs = []
    for dt in (0.1, 0.05):
        y = ssp_step(lambda t, y: lam * y, np.array([1.0]), dt, SSP_3)[0]
        z = lam * dt
        errs.append(abs(y - (1 + z + z**2 / 2 + z**3 / 6)))
        assert abs(y - np.exp(z)) <= 2 * abs(z) ** 4 / 24
    assert errs[0] < 1e-13 and errs[1] < 1e-13        # exactly the cubic Taylor polynomial


def test_tableau_rejects_perturbed_c():
    with pytest.raises(ValueError, match="c_i"):
        ButcherTableau(RK4.a, RK4.b, RK4.c + np.array([0, 1e-6, 0, 0]))
    with pytest.raises(ValueError):
        ButcherTableau(HEUN.a, [0.5, 0.6], HEUN.c)
    with pytest.raises(ValueError):
        ButcherTableau([[0.5, 0.0], [1.0, 0.0]], [0.5, 0.5], [0.5, 1.0])
    with pytest.raises(ValueError):
        ButcherTableau([[0.0]], [1.0, 0.0], [0.0])


def test_valid_tableaus_are_consistent():
    for tab in (EULER, HEUN, SSP3, RK4):
        np.testing.assert_allclose(tab.a.sum(axis=1), tab.c)
        assert tab.b.sum() == pytest.approx(1.0)


def test_ssp_schemes_are_convex():
    for scheme in SSP_SCHEMES.values():
        for al, be in zip(scheme.alpha, scheme.beta):
            assert min(al) >= 0 and min(be) >= 0
            assert sum(al) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        SSPScheme(((1.0,), (1.2, -0.2)), ((1.0,), (0.0, 0.5)))


@pytest.mark.parametrize("scheme", [SSP_EE, SSP_HEUN, SSP_3])
def test_cfl_max(scheme):
    assert scheme.cfl_max == 1.0


def test_post_stage_hook_runs_after_every_stage():
    calls = []

    def hook(y):
        calls.append(y.copy())
        return y
    ssp_step(decay, np.array([1.0]), 0.1, SSP_3, post_stage_hook=hook)
    assert len(calls) == 3
    np.testing.assert_allclose(calls[0], [0.9])


def test_stage_hook_on_rk4_stage_inputs():
    calls = []
    rk_step(decay, np.array([1.0]), 0.1, RK4, stage_hook=lambda y: calls.append(1) or y)
    assert len(calls) == 3


def test_errors_carry_stage_index():
    def rhs(t, y):
        if y[0] < 0.95:
            raise InadmissibleStateError("negative", state=y)
        return -y
    with pytest.raises(InadmissibleStateError) as info:
        ssp_step(rhs, np.array([1.0]), 0.1, SSP_HEUN)
    assert info.value.stage == 1
    with pytest.raises(InadmissibleStateError) as info:
        rk_step(rhs, np.array([1.0]), 0.2, RK4)
    assert info.value.stage == 1


def test_stage_times_passed_to_rhs():
    seen = []
    rk_step(lambda t, y: seen.append(t) or y, np.array([1.0]), 0.2, RK4, t=1.0)
    np.testing.assert_allclose(seen, [1.0, 1.1, 1.1, 1.2])


def test_dg_solution_state_advances_time():
    op = make_operator(advection_law(1.0), N=8, p=1)
    sol = make_solution(op, lambda x: np.sin(2 * np.pi * x)[..., None], t=0.5)
    out = ssp_step(op, sol, 0.01, SSP_3)
    assert isinstance(out, DGSolution) and out.t == pytest.approx(0.51)
    np.testing.assert_array_equal(out.coeffs, ssp_step(op, sol.coeffs, 0.01, SSP_3))


@pytest.mark.parametrize("p, limiter, expected", [(1, True, 0.05), (2, True, 0.1 / 6),
                                                  (1, False, 0.1 / 3), (0, False, 0.1)])
def test_compute_dt_examples(p, limiter, expected):
    op = make_operator(advection_law(1.0), N=10, p=p)
    sol = make_solution(op, lambda x: np.ones_like(x)[..., None])
    assert compute_dt(sol, 1.0, limiter) == pytest.approx(expected, rel=1e-14)


def test_compute_dt_without_waves_uses_dt_max():
    op = make_operator(advection_law(0.0), N=10, p=2)
    sol = make_solution(op, lambda x: np.ones_like(x)[..., None])
    assert compute_dt(sol, 0.9, True, dt_max=0.25) == 0.25
    with pytest.raises(ValueError):
        compute_dt(sol, 0.9, True)


def test_compute_dt_clips_to_t_end_and_validates_cfl():
    op = make_operator(advection_law(1.0), N=10, p=0)
    sol = make_solution(op, lambda x: np.ones_like(x)[..., None], t=0.97)
    assert compute_dt(sol, 1.0, False, t_end=1.0) == pytest.approx(0.03)
    for bad in (0.0, 1.5):
        with pytest.raises(ValueError):
            compute_dt(sol, bad, False)


def test_compute_dt_uses_lobatto_wave_speeds():
    law = euler_law()
    op = make_operator(law, N=4, p=2, kind="nodal_lagrange_gl")
    sol = make_solution(op, lambda x: law.conserved(1.0, 3.0 * x, 1.0))
    # fastest Lobatto point is x = 1 (velocity 3)
    expected = (0.25 / 6) / (3.0 + np.sqrt(1.4))
    assert compute_dt(sol, 1.0, True) == pytest.approx(expected, rel=1e-12)


def test_geometry_factors():
    assert cfl_geometry_factor(0, True) == 0.5
    assert cfl_geometry_factor(3, True) == pytest.approx(1 / 6)
    assert cfl_geometry_factor(4, True) == pytest.approx(1 / 12)
    assert cfl_geometry_factor(6, True) == pytest.approx(1 / 20)
    assert cfl_geometry_factor(3, False) == pytest.approx(1 / 7)
    factors = [ader_geometry_factor(p) for p in range(9)]
    assert factors[0] == 1.0 and factors[1] == pytest.approx(1 / 3)
    assert all(a > b for a, b in zip(factors, factors[1:]))
    assert all(f <= 1 / (2 * p + 1) + 1e-15 for p, f in enumerate(factors))
