import math
import warnings

import numpy as np
import pytest

from app.core.errors import MethodError, StepRestrictionWarning
from app.integrator import (
    LinearizedODE,
    RungeKuttaStepper,
    SplitLinearODE,
    TimeIntegrator,
    convergence_study,
    dahlquist,
    dec_iterate,
    nonlinear_stiff,
    observed_orders,
    rk_step,
    scalar_stiff,
    solve_ivp,
    step_times,
    stiff_oscillator,
)
from app.quadrature import AderQuadrature, dec_coefficients, make_nodes
from app.tableaux import MethodSpec, StageResolvent, build_method, explicit_euler


def _random_system(rng, size=3):
    return SplitLinearODE(
        S=rng.standard_normal((size, size)),
        G=rng.standard_normal((size, size)),
        u0=rng.standard_normal(size),
    )


def test_rk_step_explicit_euler_and_heun():
    ode = SplitLinearODE(S=[[-1.0]], G=[[0.0]], u0=[1.0])
    assert rk_step(explicit_euler(), ode, [1.0], 0.1)[0] == pytest.approx(0.9, abs=1e-15)
    heun = build_method(MethodSpec("dec", "eq", 2, "explicit"), reduce=True)
    assert rk_step(heun, ode, [1.0], 0.1)[0] == pytest.approx(0.905, abs=1e-15)


def test_zero_field_leaves_state_unchanged():
    ode = SplitLinearODE(S=np.zeros((2, 2)), G=np.zeros((2, 2)), u0=[1.0, -2.0])
    tableau = build_method(MethodSpec("ader", "glb", 3, "imex"))
    np.testing.assert_array_equal(rk_step(tableau, ode, ode.u0, 0.5), ode.u0)
    trajectory = solve_ivp(TimeIntegrator(MethodSpec("dec", "glb", 3, "imex")), ode, 1.0, 0.25)
    np.testing.assert_allclose(trajectory.states, np.tile(ode.u0, (5, 1)), atol=0.0)


FAMILY_KINDS = [
    ("dec", "eq"),
    ("dec", "glb"),
    ("sdec", "eq"),
    ("sdec", "glb"),
    ("ader", "eq"),
    ("ader", "glb"),
    ("ader", "glg"),
]


@pytest.mark.parametrize("family,kind", FAMILY_KINDS)
@pytest.mark.parametrize("mode", ["explicit", "implicit", "imex"])
@pytest.mark.parametrize("order", [2, 3, 4, 5, 6])
def test_direct_iteration_matches_tableau(family, kind, mode, order, rng):
    spec = MethodSpec(family, kind, order, mode)
    ode = _random_system(rng)
    direct = TimeIntegrator(spec, strategy="iteration").stepper(ode)(ode.u0, 0.01)
    tableau = TimeIntegrator(spec, strategy="tableau", reduce=False).stepper(ode)(ode.u0, 0.01)
    assert np.linalg.norm(direct - tableau) <= 1e-12 * np.linalg.norm(tableau)


def test_reduced_tableau_stepping_matches_unreduced(rng):
    spec = MethodSpec("sdec", "glb", 4, "imex")
    ode = _random_system(rng)
    full = TimeIntegrator(spec, strategy="tableau", reduce=False).stepper(ode)(ode.u0, 0.05)
    reduced = TimeIntegrator(spec, strategy="tableau", reduce=True).stepper(ode)(ode.u0, 0.05)
    np.testing.assert_allclose(reduced, full, rtol=1e-11)


def test_implicit_ader_does_not_depend_on_iterations(rng):
    ode = _random_system(rng)
    one = TimeIntegrator(MethodSpec("ader", "glb", 3, "implicit", iterations=1)).stepper(ode)(ode.u0, 0.1)
    five = TimeIntegrator(MethodSpec("ader", "glb", 3, "implicit", iterations=5)).stepper(ode)(ode.u0, 0.1)
    np.testing.assert_allclose(one, five, rtol=1e-12)


def test_first_implicit_dec_iteration_is_implicit_euler():
    spec = MethodSpec("dec", "glb", 3, "implicit", iterations=1)
    coeffs = dec_coefficients(make_nodes("glb", spec.M))
    ode = SplitLinearODE(S=[[-2.0]], G=[[0.0]], u0=[1.0])
    u = dec_iterate(coeffs, spec, ode, np.array([1.0]), 0.1)
    # beta^M = 1: a single implicit Euler step over the whole interval
    assert u[0] == pytest.approx(1.0 / 1.2, rel=1e-13)


def test_step_times_end_exactly():
    times = step_times(1.0, 0.3)
    assert times[-1] == 1.0
    np.testing.assert_allclose(np.diff(times)[:-1], 0.3)
    assert step_times(1.0, 0.25).size == 5


def test_explicit_dec4_on_decay():
    problem = dahlquist(-1.0, 0.0)
    trajectory = solve_ivp(TimeIntegrator(MethodSpec("dec", "glb", 4, "explicit")), problem.ode, 1.0, 0.1)
    assert abs(trajectory.final[0] - np.exp(-1.0)) <= 1e-6


@pytest.mark.parametrize("family,kind", FAMILY_KINDS)
@pytest.mark.parametrize("order", range(2, 9))
def test_dahlquist_convergence_order(family, kind, order):
    method = TimeIntegrator(MethodSpec(family, kind, order, "imex"))
    # an uneven split, the symmetric one superconverges for odd orders
    problem = dahlquist(-0.3, -0.7)
    if order <= 4:
        rows = convergence_study(method, problem, [0.2, 0.1, 0.05, 0.025])
    else:
        rows = convergence_study(method, problem, [0.5, 0.25, 0.125], t_end=2.0)
    assert rows[-1].order >= order - 0.3


@pytest.mark.parametrize("family", ["dec", "sdec"])
def test_uneven_split_shows_the_nominal_order(family):
    method = TimeIntegrator(MethodSpec(family, "glb", 3, "imex"))
    rows = convergence_study(method, dahlquist(-0.3, -0.7), [0.2, 0.1, 0.05, 0.025])
    assert rows[-1].order == pytest.approx(3.0, abs=0.3)


@pytest.mark.parametrize("order", [2, 3, 4, 5])
def test_explicit_ader_and_dec_share_the_stability_polynomial(order, rng):
    z = rng.uniform(-3, 1, 32) + 1j * rng.uniform(-3, 3, 32)
    dec = StageResolvent(build_method(MethodSpec("dec", "glb", order, "explicit")))(z)
    ader = StageResolvent(build_method(MethodSpec("ader", "glb", order, "explicit")))(z)
    taylor = sum(z**j / math.factorial(j) for j in range(order + 1))
    np.testing.assert_allclose(ader, taylor, rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(ader, dec, rtol=1e-10, atol=1e-10)


def test_observed_orders():
    orders = observed_orders([0.1, 0.05], [1e-3, 1.25e-4])
    assert np.isnan(orders[0])
    assert orders[1] == pytest.approx(3.0)


def test_convergence_study_needs_geometric_steps():
    method = TimeIntegrator(MethodSpec("dec", "glb", 2, "imex"))
    with pytest.raises(ValueError):
        convergence_study(method, dahlquist(), [0.1, 0.07, 0.02])


@pytest.mark.parametrize("family", ["dec", "ader"])
def test_imex_keeps_stiff_oscillator_bounded(family):
    problem = stiff_oscillator()
    method = TimeIntegrator(MethodSpec(family, "eq", 5, "imex"))
    assert method.spec.quadrature is AderQuadrature.EXACT
    trajectory = solve_ivp(method, problem.ode, problem.t_end, 0.1)
    assert trajectory.times[-1] == problem.t_end
    assert np.max(np.abs(trajectory.states)) < 1e3


def test_explicit_ader_blows_up_on_stiff_oscillator():
    problem = stiff_oscillator()
    method = TimeIntegrator(MethodSpec("ader", "eq", 5, "explicit"))
    trajectory = solve_ivp(method, problem.ode, problem.t_end, 0.1)
    assert not np.all(np.abs(trajectory.states) < 1e3)


def test_stiff_oscillator_exact_solution_starts_at_initial_state():
    problem = stiff_oscillator()
    np.testing.assert_allclose(problem.exact(0.0), problem.ode.u0, atol=1e-15)


@pytest.mark.parametrize("family", ["dec", "sdec", "ader"])
def test_nonlinear_stiff_equilibrium_is_kept(family):
    problem = nonlinear_stiff()
    trajectory = solve_ivp(TimeIntegrator(MethodSpec(family, "glb", 3, "imex")), problem.ode, 1.0, 0.1)
    assert trajectory.final[0] == pytest.approx(1e-3, abs=1e-12)


def test_tableau_stepping_needs_linear_problem():
    problem = nonlinear_stiff()
    with pytest.raises(MethodError):
        TimeIntegrator(MethodSpec("dec", "glb", 2, "imex"), strategy="tableau").stepper(problem.ode)


def test_linearized_ode_checks_its_jacobian():
    with pytest.raises(ValueError):
        LinearizedODE(stiff_map=lambda u: u**2, jacobian=lambda u: np.diag(u), u0=[1.0])


def test_step_guard_warns_for_large_steps():
    problem = nonlinear_stiff(y0=1.0)
    method = TimeIntegrator(MethodSpec("dec", "glb", 2, "imex"), check_step=True)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        method.stepper(problem.ode)(problem.ode.u0, 1.0)
    assert any(issubclass(item.category, StepRestrictionWarning) for item in caught)


def test_trajectory_csv_rows():
    problem = dahlquist()
    trajectory = solve_ivp(TimeIntegrator(MethodSpec("dec", "eq", 2, "imex")), problem.ode, 0.5, 0.25)
    header, rows = trajectory.to_csv_rows()
    assert header == ["t", "u0"]
    assert len(rows) == 3 and rows[0] == [0.0, 1.0]


@pytest.mark.parametrize("family,kind", [("dec", "glb"), ("sdec", "eq"), ("ader", "glb")])
def test_implicit_stages_solve_linear_problems_exactly(family, kind):
    ode = SplitLinearODE(S=[[-40.0]], G=[[0.0]], u0=[1.0])
    stepper = RungeKuttaStepper(build_method(MethodSpec(family, kind, 4, "implicit")), ode)
    assert stepper.stage_residual(np.array([1.0]), 0.3) <= 1e-13


@pytest.mark.slow
def test_implicit_sdec11_steps_on_scalar_stiff_problem():
    problem = scalar_stiff()
    method = TimeIntegrator(MethodSpec("sdec", "glb", 11, "implicit"))
    coarse = solve_ivp(method, problem.ode, problem.t_end, 1.0)
    assert abs(coarse.final[0]) > 1.0
    fine = solve_ivp(method, problem.ode, problem.t_end, 0.5)
    magnitudes = np.abs(fine.states[:, 0])
    assert np.all(np.diff(magnitudes) <= 0)
    assert magnitudes[-1] < magnitudes[0]
