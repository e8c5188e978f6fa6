from app.pdesim.experiments import (
    ErrorTable,
    PdeRun,
    discretize,
    growth_factor,
    integrate,
    matching_stencils,
    run_convergence,
    run_single,
    time_step,
)
from app.pdesim.problem import (
    PdeKind,
    PeriodicProblem,
    SemiDiscretization,
    advection_dispersion_problem,
    semidiscretize,
)

__all__ = [
    "ErrorTable",
    "PdeKind",
    "PdeRun",
    "PeriodicProblem",
    "SemiDiscretization",
    "advection_dispersion_problem",
    "discretize",
    "growth_factor",
    "integrate",
    "matching_stencils",
    "run_convergence",
    "run_single",
    "semidiscretize",
    "time_step",
]
