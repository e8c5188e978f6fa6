from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from app.core.config import settings
from app.core.errors import ConfigurationError
from app.core.logging import get_logger
from app.core.workers import RowWorkerPool
from app.integrator import RungeKuttaStepper, observed_orders, step_times
from app.pdesim.problem import (
    PdeKind,
    PeriodicProblem,
    SemiDiscretization,
    advection_dispersion_problem,
    semidiscretize,
)
from app.stencils import advection_stencil_for_order, diffusion_stencil, dispersion_stencil
from app.tableaux import MethodSpec, Mode, build_method

logger = get_logger(__name__)

UNSTABLE_ERROR = 1e3
DEFAULT_T_END = 1.0
DEFAULT_ORDERS = (2, 3, 4, 5)
DEFAULT_CELLS = tuple(2**n for n in range(5, 12))


@dataclass(frozen=True, eq=False)
class PdeRun:
    problem: PeriodicProblem
    method: str
    dt: float
    t_end: float
    final: np.ndarray
    error: float

    @property
    def stable(self) -> bool:
        return bool(np.isfinite(self.error) and self.error <= UNSTABLE_ERROR)


def _imex(spec: MethodSpec) -> MethodSpec:
    return spec if spec.mode is Mode.IMEX else replace(spec, mode=Mode.IMEX)


def time_step(J: int, C: float, a: float) -> float:
    """dt = C dx / a, or C dx without advection."""
    dx = 2 * np.pi / J
    return C * dx / a if a else C * dx


def matching_stencils(order: int, kind: PdeKind = PdeKind.DIFFUSION):
    """Advection of the method order, diffusion of order 2 ceil(order/2), dispersion of odd order."""
    advection = advection_stencil_for_order(order)
    if kind is PdeKind.DIFFUSION:
        return advection, diffusion_stencil(2 * -(-order // 2))
    return advection, dispersion_stencil(min(max(order + (order + 1) % 2, 3), 7))


def integrate(spec: MethodSpec, semi: SemiDiscretization, dt: float, t_end: float) -> np.ndarray:
    stepper = RungeKuttaStepper(build_method(_imex(spec), reduce=True), semi)
    u = np.array(semi.u0, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        for step in np.diff(step_times(t_end, dt)):
            u = stepper.step(u, float(step))
            if not np.all(np.isfinite(u)):
                break
    return u


def discretize(
    spec: MethodSpec,
    J: int,
    C: float,
    E: float,
    a: float = 1.0,
    kind: PdeKind = PdeKind.DIFFUSION,
    adv_order: int | None = None,
    implicit_order: int | None = None,
) -> tuple[SemiDiscretization, float]:
    """Semi-discretization and time step for the numbers C and E."""
    kind = PdeKind(kind)
    if C <= 0 or E <= 0:
        raise ConfigurationError(f"C and E must be positive, got C={C}, E={E}")
    dt = time_step(J, C, a)
    dx = 2 * np.pi / J
    if kind is PdeKind.DIFFUSION:
        problem = PeriodicProblem(J=J, a=a, d=a**2 * dt / E, kind=kind)
    else:
        problem = advection_dispersion_problem(J, a, beta=(C / E) * dx**3 / dt)
    advection, implicit = matching_stencils(spec.order, kind)
    if adv_order is not None:
        advection = advection_stencil_for_order(adv_order)
    if implicit_order is not None:
        implicit = (diffusion_stencil if kind is PdeKind.DIFFUSION else dispersion_stencil)(implicit_order)
    return semidiscretize(problem, advection, implicit), dt


def run_single(
    spec: MethodSpec,
    J: int,
    C: float,
    E: float,
    t_end: float = DEFAULT_T_END,
    a: float = 1.0,
    kind: PdeKind = PdeKind.DIFFUSION,
    adv_order: int | None = None,
    implicit_order: int | None = None,
) -> PdeRun:
    """One run; E is the diffusion number C^2/D, or E_P = C/P for dispersion."""
    semi, dt = discretize(spec, J, C, E, a, kind, adv_order, implicit_order)
    problem = semi.problem
    final = integrate(spec, semi, dt, t_end)
    error = problem.l2_error(final, t_end) if np.all(np.isfinite(final)) else float("inf")
    run = PdeRun(problem=problem, method=_imex(spec).label, dt=dt, t_end=t_end, final=final, error=error)
    if not run.stable:
        logger.warning("%s unstable on J=%d (error %.3e)", run.method, J, error)
    return run


@dataclass(frozen=True)
class ErrorTable:
    cells: tuple[int, ...]
    errors: dict[int, list[float]]
    C: float
    E: float
    t_end: float
    methods: dict[int, str] = field(default_factory=dict)
    growth: dict[int, float] = field(default_factory=dict)

    def orders(self, order: int) -> list[float]:
        steps = [2 * np.pi / J for J in self.cells]
        return observed_orders(steps, self.errors[order])

    def unstable(self) -> list[tuple[int, int]]:
        return [
            (order, J)
            for order, errors in self.errors.items()
            for J, error in zip(self.cells, errors)
            if not (np.isfinite(error) and error <= UNSTABLE_ERROR)
        ]

    def to_csv_rows(self) -> tuple[list[str], list[list[float]]]:
        header = ["N"] + [f"order{order}" for order in self.errors]
        rows = [
            [float(J), *(float(self.errors[order][i]) for order in self.errors)]
            for i, J in enumerate(self.cells)
        ]
        return header, rows


def run_convergence(
    spec: MethodSpec,
    orders: Sequence[int] = DEFAULT_ORDERS,
    C: float = 0.4,
    E: float = 0.5,
    cells: Sequence[int] = DEFAULT_CELLS,
    t_end: float = DEFAULT_T_END,
    a: float = 1.0,
    threads: int | None = None,
    seed: int | None = None,
) -> ErrorTable:
    """Advection-diffusion refinement study; `spec.order` is replaced by each entry of `orders`.

    Each order also gets the per-step growth of a seeded random vector on the coarsest grid.
    """
    threads = settings.threads if threads is None else threads
    specs = {order: replace(_imex(spec), order=order) for order in orders}
    jobs = [(order, J) for order in orders for J in cells]

    def job(item: tuple[int, int]) -> float:
        order, J = item
        return run_single(specs[order], J, C, E, t_end, a).error

    logger.info("Start PDE convergence of %s on %d runs", spec.family.value, len(jobs))
    results = dict(zip(jobs, RowWorkerPool(threads).map(job, jobs)))
    growth = {
        order: growth_factor(specs[order], *discretize(specs[order], cells[0], C, E, a), seed=seed) for order in orders
    }
    return ErrorTable(
        cells=tuple(cells),
        errors={order: [results[(order, J)] for J in cells] for order in orders},
        C=C,
        E=E,
        t_end=t_end,
        methods={order: specs[order].label for order in orders},
        growth=growth,
    )


def growth_factor(
    spec: MethodSpec, semi: SemiDiscretization, dt: float, steps: int = 50, seed: int | None = None
) -> float:
    """Empirical per-step amplification of a random initial vector."""
    seed = settings.seed if seed is None else seed
    stepper = RungeKuttaStepper(build_method(_imex(spec), reduce=True), semi)
    u = np.random.default_rng(seed).standard_normal(semi.dimension)
    start = np.linalg.norm(u)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(steps):
            u = stepper.step(u, dt)
    end = np.linalg.norm(u)
    if not np.isfinite(end):
        return float("inf")
    return float((end / start) ** (1.0 / steps))
