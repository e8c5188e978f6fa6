"""One handler per command; each writes its CSV/JSON files plus a metadata document."""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from app import __version__
from app.core.errors import ConfigurationError
from app.core.logging import get_logger
from app.integrator import REFERENCE_PROBLEMS, TimeIntegrator, convergence_study, dahlquist, solve_ivp
from app.pdesim import run_convergence
from app.quadrature import make_nodes
from app.schemas import (
    BorderSummary,
    ConvergenceMetadata,
    ConvergenceRowDump,
    JobConfig,
    JobMetadata,
    MethodConfig,
    RegionMetadata,
    StencilDump,
    TableauDump,
    TrajectoryMetadata,
    VonNeumannMetadata,
    coefficient_dump,
)
from app.schemas.jobs import ConvergenceParams, SolveParams, StabilityParams, VonNeumannParams
from app.services.io import write_csv, write_json, write_pgm
from app.stability import (
    StabilityGrid,
    d0_region,
    d1_region,
    imaginary_axis_excess,
    left_half_plane_max,
    minion_region,
    negative_real_border,
    scan_region,
)
from app.tableaux import IMEXTableau, MethodSpec, Mode, StageResolvent, build_method
from app.vonneumann import Plane, ScanSpec, VonNeumannMap, scan

logger = get_logger(__name__)

REAL_AXIS_RANGE = (-1500.0, 0.0, 1501)


def method_spec(config: MethodConfig) -> MethodSpec:
    return MethodSpec(
        family=config.family,
        kind=config.nodes,
        order=config.order,
        mode=config.mode,
        quadrature=config.quadrature,
        iterations=config.iterations,
    )


@dataclass
class JobContext:
    config: JobConfig
    started: float = field(default_factory=time.perf_counter)
    files: list[Path] = field(default_factory=list)

    @property
    def out(self) -> Path:
        return Path(self.config.out)

    def csv(self, name: str, header, rows) -> None:
        self.files.append(write_csv(self.out / f"{name}.csv", header, rows))

    def json(self, name: str, document: BaseModel) -> None:
        self.files.append(write_json(self.out / f"{name}.json", document))

    def pgm(self, name: str, mask: np.ndarray) -> None:
        self.files.append(write_pgm(self.out / f"{name}.pgm", mask))

    def finish(self, name: str, result: BaseModel) -> list[Path]:
        metadata = JobMetadata(
            command=self.config.command,
            version=__version__,
            wall_time_seconds=round(time.perf_counter() - self.started, 3),
            config=self.config.model_dump(mode="json"),
            result=result.model_dump(mode="json"),
        )
        self.json(f"{name}.meta", metadata)
        return self.files


def cmd_tableau(config: JobConfig) -> list[Path]:
    ctx = JobContext(config)
    spec = method_spec(config.method)
    tableau = build_method(spec, reduce=config.method.reduce)
    name = f"tableau-{tableau.label}"
    dump = TableauDump.from_tableau(tableau, spec)
    ctx.json(name, dump)
    header = ["part", "stage", *[f"a{j}" for j in range(tableau.Z)], "b", "c"]
    rows = [
        [part.name, i, *part.A[i], part.b[i], part.c[i]]
        for part in dump.parts
        for i in range(tableau.Z)
    ]
    ctx.csv(name, header, rows)
    nodes = make_nodes(spec.kind, spec.M)
    ctx.json(f"coefficients-{nodes.kind.short}-M{nodes.M}", coefficient_dump(nodes, spec.quadrature))
    return ctx.finish(name, dump)


def _region_metadata(grid: StabilityGrid) -> RegionMetadata:
    return RegionMetadata(
        kind=grid.kind,
        label=grid.label,
        bounds=grid.bounds,
        resolution=grid.resolution,
        offset=grid.offset,
        stable_fraction=float(grid.stable.mean()),
        extras=grid.extras,
    )


def _real_axis(ctx: JobContext, tableau, name: str) -> list[Path]:
    if isinstance(tableau, IMEXTableau):
        raise ConfigurationError("real-axis analysis needs a single tableau, use --mode implicit or explicit")
    lower, upper, points = REAL_AXIS_RANGE
    x = np.linspace(lower, upper, points)
    values = np.abs(StageResolvent(tableau)(x))
    ctx.csv(name, ["re", "absR"], [[float(a), float(b)] for a, b in zip(x, values)])
    result = RegionMetadata(
        kind="real-axis",
        label=tableau.label,
        bounds=(lower, upper, 0.0, 0.0),
        resolution=points,
        offset=0.0,
        stable_fraction=float(np.mean(values <= 1.0 + 1e-12)),
        extras={
            "negative_real_border": negative_real_border(tableau, lower, upper, points),
            "imaginary_axis_excess": imaginary_axis_excess(tableau),
            "left_half_plane_max": left_half_plane_max(tableau),
        },
    )
    return ctx.finish(name, result)


def cmd_stability(config: JobConfig) -> list[Path]:
    ctx = JobContext(config)
    params = config.stability or StabilityParams()
    spec = method_spec(config.method)
    if params.kind in ("minion", "d0", "d1") and spec.mode is not Mode.IMEX:
        spec = replace(spec, mode=Mode.IMEX)
    tableau = build_method(spec, reduce=True)
    name = f"stability-{params.kind}-{tableau.label}"
    if params.kind == "real-axis":
        return _real_axis(ctx, tableau, name)

    options = {"resolution": params.resolution, "offset": params.offset, "threads": config.threads}
    if params.bounds is not None:
        options["bounds"] = params.bounds
    match params.kind:
        case "region":
            resolvent = StageResolvent(tableau)
            if isinstance(tableau, IMEXTableau):
                evaluator = lambda z: resolvent(z, z)  # noqa: E731
            else:
                evaluator = resolvent
            grid = scan_region(evaluator, label=tableau.label, **options)
        case "minion":
            grid = minion_region(tableau, **options)
        case "d0":
            grid = d0_region(tableau, **options)
        case "d1":
            grid = d1_region(tableau, **options)
    ctx.csv(name, *grid.to_csv_rows())
    if params.pgm:
        ctx.pgm(name, grid.stable)
    return ctx.finish(name, _region_metadata(grid))


def _round_border(axis: str, value: float | None) -> float | None:
    if value is None:
        return None
    if axis == "C":
        return round(value, 2)
    if axis == "E":
        return round(value, 1)
    return float(f"{value:.2g}")


def border_summary(vn_map: VonNeumannMap) -> BorderSummary:
    spec = vn_map.spec
    second_axis = spec.plane.second_axis
    c_border = vn_map.borders["C0"]
    second_border = vn_map.borders[f"{second_axis}0"]
    return BorderSummary(
        method=spec.method.label,
        plane=spec.plane.value,
        advection_order=spec.advection_order,
        implicit_order=spec.implicit_order,
        C0=_round_border("C", c_border.value),
        C0_valid=c_border.valid,
        second_axis=second_axis,
        second0=_round_border(second_axis, second_border.value),
        second0_valid=second_border.valid,
        valid=c_border.valid and second_border.valid,
    )


def scan_spec(config: JobConfig) -> ScanSpec:
    params = config.vonneumann or VonNeumannParams()
    plane = Plane(params.plane)
    if plane.dispersive:
        if params.diff is not None:
            raise ConfigurationError(f"plane {plane.value} is dispersive, use --disp instead of --diff")
        implicit_order = 3 if params.disp is None else params.disp
    else:
        if params.disp is not None:
            raise ConfigurationError(f"plane {plane.value} is diffusive, use --diff instead of --disp")
        implicit_order = 2 if params.diff is None else params.diff
    options = {}
    if params.c_range is not None:
        options["c_range"] = params.c_range
    if params.second_range is not None:
        options["second_range"] = params.second_range
    return ScanSpec(
        method=method_spec(config.method),
        advection_order=params.adv,
        implicit_order=implicit_order,
        plane=plane,
        resolution=params.resolution,
        wavenumbers=params.n0,
        **options,
    )


def cmd_vonneumann(config: JobConfig) -> list[Path]:
    ctx = JobContext(config)
    spec = scan_spec(config)
    vn_map = scan(spec, threads=config.threads)
    name = f"vonneumann-{spec.label}"
    ctx.csv(name, *vn_map.to_csv_rows())
    if (config.vonneumann or VonNeumannParams()).pgm:
        ctx.pgm(name, vn_map.stable)
    borders = border_summary(vn_map)
    ctx.json(f"{name}-borders", borders)
    result = VonNeumannMetadata(
        label=spec.label,
        plane=spec.plane.value,
        c_range=spec.c_range,
        second_range=spec.second_range,
        resolution=spec.resolution,
        wavenumbers=spec.wavenumbers,
        stable_fraction=float(vn_map.stable.mean()),
        borders=borders,
        advection=StencilDump.from_stencil(spec.advection),
        implicit=StencilDump.from_stencil(spec.implicit_stencil),
    )
    return ctx.finish(name, result)


def _order_or_none(value: float) -> float | None:
    return None if math.isnan(value) else value


def cmd_convergence(config: JobConfig) -> list[Path]:
    ctx = JobContext(config)
    params = config.convergence or ConvergenceParams()
    base = method_spec(config.method)
    name = f"convergence-{params.problem}-{base.family.value}-{base.kind.short}-{base.mode.value}"

    if params.problem == "pde":
        table = run_convergence(
            base,
            params.orders,
            params.C,
            params.E,
            params.cells,
            params.t_end,
            threads=config.threads,
            seed=config.seed,
        )
        ctx.csv(name, *table.to_csv_rows())
        steps = [2 * np.pi / J for J in table.cells]
        result = ConvergenceMetadata(
            problem="advection-diffusion",
            methods={str(order): label for order, label in table.methods.items()},
            norm="discrete-l2",
            t_end=params.t_end,
            rows={
                str(order): [
                    ConvergenceRowDump(h=h, error=error, order=_order_or_none(observed))
                    for h, error, observed in zip(steps, table.errors[order], table.orders(order))
                ]
                for order in table.errors
            },
            unstable=table.unstable(),
            growth={str(order): factor for order, factor in table.growth.items()},
            seed=config.seed,
        )
        return ctx.finish(name, result)

    problem = dahlquist()
    studies = {}
    for order in params.orders:
        method = TimeIntegrator(replace(base, order=order), strategy=params.strategy)
        studies[order] = (method.label, convergence_study(method, problem, params.steps, params.t_end))
    header = ["h", *[f"order{order}" for order in params.orders]]
    rows = [
        [h, *(studies[order][1][i].error for order in params.orders)] for i, h in enumerate(params.steps)
    ]
    ctx.csv(name, header, rows)
    result = ConvergenceMetadata(
        problem=problem.name,
        methods={str(order): label for order, (label, _) in studies.items()},
        norm="max",
        t_end=params.t_end,
        rows={
            str(order): [
                ConvergenceRowDump(h=row.h, error=row.error, order=_order_or_none(row.order)) for row in study
            ]
            for order, (_, study) in studies.items()
        },
    )
    return ctx.finish(name, result)


def cmd_solve(config: JobConfig) -> list[Path]:
    ctx = JobContext(config)
    params = config.solve or SolveParams()
    problem = REFERENCE_PROBLEMS[params.problem]()
    method = TimeIntegrator(method_spec(config.method), strategy=params.strategy, reduce=config.method.reduce)
    t_end = problem.t_end if params.t_end is None else params.t_end
    trajectory = solve_ivp(method, problem.ode, t_end, params.h)
    name = f"solve-{problem.name}-{method.label}"
    ctx.csv(name, *trajectory.to_csv_rows())
    error = None
    if problem.exact is not None and trajectory.times[-1] == t_end:
        error = float(np.max(np.abs(trajectory.final - problem.exact(t_end))))
    result = TrajectoryMetadata(
        problem=problem.name,
        method=method.label,
        strategy=method.strategy.value,
        h=params.h,
        t_end=t_end,
        steps=trajectory.times.size - 1,
        final=[float(value) for value in trajectory.final],
        error=error,
    )
    return ctx.finish(name, result)


COMMANDS: dict[str, Callable[[JobConfig], list[Path]]] = {
    "tableau": cmd_tableau,
    "stability": cmd_stability,
    "vonneumann": cmd_vonneumann,
    "convergence": cmd_convergence,
    "solve": cmd_solve,
}


def run_job(config: JobConfig) -> list[Path]:
    logger.info("Start job %s", config.command)
    files = COMMANDS[config.command](config)
    logger.info("Job %s Done with %d files", config.command, len(files))
    return files
