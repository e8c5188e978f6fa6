"""Grid scans of |R| over the scalar plane and the IMEX planes.

Every scan uses the same convention: both axes are linspaces over the
requested bounds shifted by `offset`, rows run over the second axis and
a cell is stable when |R| <= 1 + STABILITY_TOLERANCE. Poles count as
unstable.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from app.core.config import settings
from app.core.logging import get_logger
from app.core.workers import RowWorkerPool
from app.tableaux import ButcherTableau, IMEXTableau, StageResolvent

logger = get_logger(__name__)

STABILITY_TOLERANCE = 1e-12

Bounds = tuple[float, float, float, float]
RowEvaluator = Callable[[np.ndarray, float], np.ndarray]

DEFAULT_REGION_BOUNDS: Bounds = (-5.0, 5.0, -5.0, 5.0)
DEFAULT_MINION_BOUNDS: Bounds = (-100.0, 0.0, -100.0, 100.0)
DEFAULT_D0_BOUNDS: Bounds = (-3.0, 1.0, -3.0, 3.0)
DEFAULT_D1_BOUNDS: Bounds = (-10.0, 2.0, -10.0, 10.0)


@dataclass(frozen=True, eq=False)
class StabilityGrid:
    """|R| (or its maximum over a sample set) on a rectangular grid.

    `values[i, j]` belongs to the point (x_axis[j], y_axis[i]).
    """

    kind: str
    label: str
    bounds: Bounds
    resolution: int
    offset: float
    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray
    extras: dict = field(default_factory=dict)

    @property
    def stable(self) -> np.ndarray:
        return self.values <= 1.0 + STABILITY_TOLERANCE

    def to_csv_rows(self) -> tuple[list[str], list[list[float]]]:
        header = ["re", "im", "absR"]
        rows = [
            [float(x), float(y), float(self.values[i, j])]
            for i, y in enumerate(self.y_axis)
            for j, x in enumerate(self.x_axis)
        ]
        return header, rows


def grid_axes(bounds: Bounds, resolution: int, offset: float) -> tuple[np.ndarray, np.ndarray]:
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    if not np.all(np.isfinite(bounds)):
        raise ValueError(f"bounds must be finite, got {bounds}")
    x_min, x_max, y_min, y_max = bounds
    return (
        np.linspace(x_min, x_max, resolution) + offset,
        np.linspace(y_min, y_max, resolution) + offset,
    )


def _scan(
    kind: str,
    label: str,
    row: RowEvaluator,
    bounds: Bounds,
    resolution: int,
    offset: float,
    threads: int,
) -> StabilityGrid:
    x_axis, y_axis = grid_axes(bounds, resolution, offset)
    logger.info("Start %s scan of %s on %dx%d", kind, label, resolution, resolution)
    rows = RowWorkerPool(threads).map(lambda y: np.abs(row(x_axis, float(y))), list(y_axis))
    return StabilityGrid(
        kind=kind,
        label=label,
        bounds=bounds,
        resolution=resolution,
        offset=offset,
        x_axis=x_axis,
        y_axis=y_axis,
        values=np.array(rows),
    )


def _defaults(resolution: int | None, offset: float | None, threads: int | None) -> tuple[int, float, int]:
    return (
        settings.ode_grid_resolution if resolution is None else resolution,
        settings.ode_grid_offset if offset is None else offset,
        settings.threads if threads is None else threads,
    )


def scan_region(
    evaluator: Callable[[np.ndarray], np.ndarray],
    bounds: Bounds = DEFAULT_REGION_BOUNDS,
    resolution: int | None = None,
    offset: float | None = None,
    threads: int | None = None,
    label: str = "",
) -> StabilityGrid:
    """|evaluator(z)| on the complex plane."""
    resolution, offset, threads = _defaults(resolution, offset, threads)
    return _scan(
        "region", label, lambda x, y: evaluator(x + 1j * y), bounds, resolution, offset, threads
    )


def wedge_angle(grid: StabilityGrid) -> int:
    """Largest half-angle in whole degrees of a wedge around the negative real axis that is fully stable."""
    x, y = np.meshgrid(grid.x_axis, grid.y_axis)
    left = x < 0
    unstable = ~grid.stable
    angle = 0
    for degrees in range(1, 90):
        inside = left & (np.abs(y) <= np.tan(np.radians(degrees)) * np.abs(x))
        if np.any(unstable & inside):
            break
        angle = degrees
    return angle


def minion_region(
    tableau: IMEXTableau,
    bounds: Bounds = DEFAULT_MINION_BOUNDS,
    resolution: int | None = None,
    offset: float | None = None,
    threads: int | None = None,
) -> StabilityGrid:
    """Real implicit argument on the x axis, purely imaginary explicit argument on the y axis."""
    resolution, offset, threads = _defaults(resolution, offset, threads)
    resolvent = StageResolvent(tableau)
    grid = _scan(
        "minion",
        tableau.label,
        lambda x, y: resolvent(x, np.full(x.shape, 1j * y)),
        bounds,
        resolution,
        offset,
        threads,
    )
    grid.extras["alpha_degrees"] = wedge_angle(grid)
    return grid


def default_d0_samples() -> np.ndarray:
    """Implicit arguments covering the open left half plane, plus the negative real axis."""
    magnitudes = np.logspace(-2, 6, 40)
    angles = np.radians(np.linspace(90.0, 270.0, 38)[1:-1])
    wedge = (magnitudes[:, None] * np.exp(1j * angles)[None, :]).ravel()
    return np.concatenate([wedge, -magnitudes.astype(complex)])


def default_d1_samples() -> np.ndarray:
    """Explicit arguments filling the explicit Euler disk |1 + z| <= 1."""
    radii = np.linspace(0.0, 1.0, 16)
    angles = 2.0 * np.pi * np.arange(64) / 64
    samples = (-1.0 + radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    return np.unique(np.round(samples, 15))


def _worst_case_row(resolvent: StageResolvent, samples: np.ndarray, sample_is_implicit: bool) -> RowEvaluator:
    def row(x: np.ndarray, y: float) -> np.ndarray:
        grid_points = (x + 1j * y)[:, None]
        if sample_is_implicit:
            values = resolvent(samples[None, :], grid_points)
        else:
            values = resolvent(grid_points, samples[None, :])
        return np.max(np.abs(values), axis=1)

    return row


def d0_region(
    tableau: IMEXTableau,
    bounds: Bounds = DEFAULT_D0_BOUNDS,
    implicit_samples: np.ndarray | None = None,
    resolution: int | None = None,
    offset: float | None = None,
    threads: int | None = None,
) -> StabilityGrid:
    """Explicit arguments that stay stable for every sampled implicit argument in the left half plane."""
    resolution, offset, threads = _defaults(resolution, offset, threads)
    samples = default_d0_samples() if implicit_samples is None else np.asarray(implicit_samples)
    row = _worst_case_row(StageResolvent(tableau), samples, sample_is_implicit=True)
    grid = _scan("d0", tableau.label, row, bounds, resolution, offset, threads)
    grid.extras["samples"] = int(samples.size)
    return grid


def d1_region(
    tableau: IMEXTableau,
    bounds: Bounds = DEFAULT_D1_BOUNDS,
    explicit_samples: np.ndarray | None = None,
    resolution: int | None = None,
    offset: float | None = None,
    threads: int | None = None,
) -> StabilityGrid:
    """Implicit arguments that stay stable for every sampled explicit argument in the Euler disk."""
    resolution, offset, threads = _defaults(resolution, offset, threads)
    samples = default_d1_samples() if explicit_samples is None else np.asarray(explicit_samples)
    row = _worst_case_row(StageResolvent(tableau), samples, sample_is_implicit=False)
    grid = _scan("d1", tableau.label, row, bounds, resolution, offset, threads)
    grid.extras["samples"] = int(samples.size)
    return grid


def negative_real_border(
    tableau: ButcherTableau, lower: float = -1500.0, upper: float = 0.0, points: int = 1501
) -> float:
    """Left end of the stable interval [x, 0) of the negative real axis; `lower` if all of it is stable."""
    x = np.linspace(lower, upper, points)
    x = x[x < 0][::-1]
    stable = np.abs(StageResolvent(tableau)(x)) <= 1.0 + STABILITY_TOLERANCE
    if stable.all():
        return float(lower)
    first_unstable = int(np.argmin(stable))
    return float(x[first_unstable - 1]) if first_unstable else 0.0


def imaginary_axis_excess(tableau: ButcherTableau, y_max: float = 1e3, points: int = 4001) -> float:
    """max(|R(iy)| - 1) over |y| <= y_max; raw value, not classified."""
    y = np.linspace(-y_max, y_max, points)
    return float(np.max(np.abs(StageResolvent(tableau)(1j * y)) - 1.0))


def left_half_plane_max(tableau: ButcherTableau, points: int = 100) -> float:
    """max |R| over a log-spaced grid of the left half plane, Re z in [-1e6, -1e-3], |Im z| <= 1e6."""
    real = -np.logspace(-3, 6, points)
    half = np.logspace(-3, 6, points // 2)
    imag = np.concatenate([-half[::-1], half])
    z = real[None, :] + 1j * imag[:, None]
    return float(np.max(np.abs(StageResolvent(tableau)(z))))
