from __future__ import annotations

import enum
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from app.core.errors import ConfigurationError
from app.core.logging import get_logger
from app.integrator.iterations import ader_iterate, dec_iterate
from app.integrator.problems import ReferenceProblem, SplitProblem
from app.integrator.runge_kutta import RungeKuttaStepper
from app.quadrature import ader_operators, dec_coefficients, make_nodes
from app.tableaux import ButcherTableau, Family, IMEXTableau, MethodSpec, build_method

logger = get_logger(__name__)

Stepper = Callable[[np.ndarray, float], np.ndarray]


class Strategy(str, enum.Enum):
    TABLEAU = "tableau"
    ITERATION = "iteration"


@dataclass(frozen=True)
class TimeIntegrator:
    """A method plus the way it is stepped: through its tableau or by direct iteration."""

    spec: MethodSpec
    strategy: Strategy = Strategy.ITERATION
    reduce: bool = True
    check_step: bool = False

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "strategy", Strategy(self.strategy))
        except ValueError:
            raise ConfigurationError(f"unknown stepping strategy {self.strategy!r}") from None

    @property
    def label(self) -> str:
        return self.spec.label

    @cached_property
    def tableau(self) -> ButcherTableau | IMEXTableau:
        return build_method(self.spec, reduce=self.reduce)

    def stepper(self, problem: SplitProblem) -> Stepper:
        if self.strategy is Strategy.TABLEAU:
            return RungeKuttaStepper(self.tableau, problem).step
        nodes = make_nodes(self.spec.kind, self.spec.M)
        if self.spec.family is Family.ADER:
            ops = ader_operators(nodes, self.spec.quadrature)
            return lambda u, dt: ader_iterate(ops, self.spec, problem, u, dt, self.check_step)
        coeffs = dec_coefficients(nodes)
        return lambda u, dt: dec_iterate(coeffs, self.spec, problem, u, dt, self.check_step)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    method: str

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_csv_rows(self) -> tuple[list[str], list[list[float]]]:
        header = ["t"] + [f"u{i}" for i in range(self.states.shape[1])]
        rows = [[float(t), *map(float, state)] for t, state in zip(self.times, self.states)]
        return header, rows


def step_times(t_end: float, h: float) -> np.ndarray:
    """Uniform times with a final truncated step landing exactly on t_end."""
    if h <= 0 or t_end <= 0:
        raise ConfigurationError(f"need h > 0 and tEnd > 0, got h={h}, tEnd={t_end}")
    count = int(np.floor(t_end / h + 1e-9))
    times = h * np.arange(count + 1)
    if t_end - times[-1] > 1e-9 * h:
        times = np.append(times, t_end)
    else:
        times[-1] = t_end
    return times


def solve_ivp(method: TimeIntegrator, ode: SplitProblem, t_end: float, h: float) -> Trajectory:
    times = step_times(t_end, h)
    step = method.stepper(ode)
    states = [np.asarray(ode.u0, dtype=float)]
    logger.info("Start %s on %d steps h=%.6g tEnd=%.6g", method.label, times.size - 1, h, t_end)
    with np.errstate(over="ignore", invalid="ignore"):
        for dt in np.diff(times):
            state = step(states[-1], float(dt))
            states.append(state)
            if not np.all(np.isfinite(state)):
                logger.warning("%s overflowed at t=%.6g", method.label, times[len(states) - 1])
                break
    times = times[: len(states)]
    return Trajectory(times=times, states=np.array(states), method=method.label)


@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    error: float
    order: float


def observed_orders(steps: Sequence[float], errors: Sequence[float]) -> list[float]:
    orders = [float("nan")]
    for i in range(1, len(errors)):
        if errors[i] > 0 and errors[i - 1] > 0:
            orders.append(float(np.log(errors[i - 1] / errors[i]) / np.log(steps[i - 1] / steps[i])))
        else:
            orders.append(float("nan"))
    return orders


def convergence_study(
    method: TimeIntegrator, problem: ReferenceProblem, h_list: Sequence[float], t_end: float | None = None
) -> list[ConvergenceRow]:
    if problem.exact is None:
        raise ConfigurationError(f"{problem.name} has no exact solution to compare against")
    steps = [float(h) for h in h_list]
    if len(steps) < 3:
        raise ConfigurationError("a convergence study needs at least three step sizes")
    ratios = [steps[i] / steps[i + 1] for i in range(len(steps) - 1)]
    if not np.allclose(ratios, ratios[0], rtol=1e-9) or ratios[0] <= 1:
        raise ConfigurationError(f"step sizes must form a decreasing geometric sequence, got {steps}")

    t_end = problem.t_end if t_end is None else t_end
    exact = problem.exact(t_end)
    errors = []
    for h in steps:
        final = solve_ivp(method, problem.ode, t_end, h).final
        errors.append(float(np.max(np.abs(final - exact))))
    return [
        ConvergenceRow(h=h, error=error, order=order)
        for h, error, order in zip(steps, errors, observed_orders(steps, errors))
    ]
