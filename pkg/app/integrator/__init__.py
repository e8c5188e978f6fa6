from app.integrator.iterations import ader_iterate, dec_iterate
from app.integrator.problems import (
    REFERENCE_PROBLEMS,
    LinearizedODE,
    LinearSplitProblem,
    ReferenceProblem,
    SplitLinearODE,
    SplitProblem,
    central_difference_jacobian,
    dahlquist,
    nonlinear_stiff,
    scalar_stiff,
    stiff_oscillator,
)
from app.integrator.runge_kutta import RungeKuttaStepper, rk_step
from app.integrator.solve import (
    ConvergenceRow,
    Strategy,
    TimeIntegrator,
    Trajectory,
    convergence_study,
    observed_orders,
    solve_ivp,
    step_times,
)

__all__ = [
    "REFERENCE_PROBLEMS",
    "ConvergenceRow",
    "LinearSplitProblem",
    "LinearizedODE",
    "ReferenceProblem",
    "RungeKuttaStepper",
    "SplitLinearODE",
    "SplitProblem",
    "Strategy",
    "TimeIntegrator",
    "Trajectory",
    "ader_iterate",
    "central_difference_jacobian",
    "convergence_study",
    "dahlquist",
    "dec_iterate",
    "nonlinear_stiff",
    "observed_orders",
    "rk_step",
    "scalar_stiff",
    "solve_ivp",
    "step_times",
    "stiff_oscillator",
]
