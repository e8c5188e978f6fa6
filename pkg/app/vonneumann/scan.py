"""Parameter-plane scans of max_k |g| and extraction of the stability borders."""

from __future__ import annotations

import enum
from collections.abc import Callable
from dataclasses import dataclass, field, replace

import numpy as np

from app.core.config import settings
from app.core.errors import ConfigurationError
from app.core.logging import get_logger
from app.core.workers import RowWorkerPool
from app.stencils import Stencil, advection_stencil_for_order, diffusion_stencil, dispersion_stencil
from app.tableaux import MethodSpec, Mode, build_method
from app.vonneumann.amplification import max_amplification, wavenumber_angles

logger = get_logger(__name__)


class Plane(str, enum.Enum):
    CD = "CD"
    CE = "CE"
    CP = "CP"
    CEP = "CEP"

    @property
    def dispersive(self) -> bool:
        return self in (Plane.CP, Plane.CEP)

    @property
    def implicit_grows(self) -> bool:
        """The implicit number rises along the second axis (D or P itself) instead of falling (E or E_P)."""
        return self in (Plane.CD, Plane.CP)

    @property
    def second_axis(self) -> str:
        return {Plane.CD: "D", Plane.CE: "E", Plane.CP: "P", Plane.CEP: "E_P"}[self]


DEFAULT_C_RANGE = (0.01, 10.0)
DEFAULT_SECOND_RANGES = {
    Plane.CD: (1e-2, 1e2),
    Plane.CE: (1e-2, 1e2),
    Plane.CP: (1e-4, 1e2),
    Plane.CEP: (1e-6, 1e-1),
}
BISECTION_STEPS = 40


@dataclass(frozen=True)
class ScanSpec:
    """C runs linearly over `c_range`, the second axis logarithmically over `second_range`."""

    method: MethodSpec
    advection_order: int
    implicit_order: int
    plane: Plane = Plane.CE
    c_range: tuple[float, float] = DEFAULT_C_RANGE
    second_range: tuple[float, float] | None = None
    resolution: int | None = None
    wavenumbers: int | None = None

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "plane", Plane(getattr(self.plane, "value", self.plane).upper()))
        except (AttributeError, ValueError):
            raise ConfigurationError(f"unknown plane {self.plane!r}") from None
        if self.method.mode is not Mode.IMEX:
            object.__setattr__(self, "method", replace(self.method, mode=Mode.IMEX))
        if self.second_range is None:
            object.__setattr__(self, "second_range", DEFAULT_SECOND_RANGES[self.plane])
        if self.resolution is None:
            object.__setattr__(self, "resolution", settings.pde_grid_resolution)
        if self.wavenumbers is None:
            object.__setattr__(self, "wavenumbers", settings.wavenumber_count)
        if self.resolution < 2:
            raise ConfigurationError(f"resolution must be at least 2, got {self.resolution}")
        if self.wavenumbers < 1:
            raise ConfigurationError(f"wavenumber count must be positive, got {self.wavenumbers}")
        if min(self.second_range) <= 0 or min(self.c_range) < 0:
            raise ConfigurationError("scan ranges must be positive (the second axis is logarithmic)")

    @property
    def advection(self) -> Stencil:
        return advection_stencil_for_order(self.advection_order)

    @property
    def implicit_stencil(self) -> Stencil:
        if self.plane.dispersive:
            return dispersion_stencil(self.implicit_order)
        return diffusion_stencil(self.implicit_order)

    @property
    def label(self) -> str:
        implicit = "B" if self.plane.dispersive else "D"
        return f"{self.method.label}-A{self.advection_order}-{implicit}{self.implicit_order}-{self.plane.value}"

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        c_axis = np.linspace(*self.c_range, self.resolution)
        low, high = self.second_range
        return c_axis, np.logspace(np.log10(low), np.log10(high), self.resolution)


@dataclass(frozen=True)
class Border:
    value: float | None
    valid: bool


@dataclass(frozen=True, eq=False)
class VonNeumannMap:
    """`values[i, j]` is max_k |g| at (c_axis[j], second_axis[i]); `limit[j]` at c_axis[j] without the implicit term."""

    spec: ScanSpec
    c_axis: np.ndarray
    second_axis: np.ndarray
    values: np.ndarray
    limit: np.ndarray | None = None
    borders: dict[str, Border] = field(default_factory=dict)

    @property
    def stable(self) -> np.ndarray:
        return self.values <= 1.0 + settings.amplification_tolerance

    def to_csv_rows(self) -> tuple[list[str], list[list[float]]]:
        rows = [
            [float(c), float(v), float(self.values[i, j])]
            for i, v in enumerate(self.second_axis)
            for j, c in enumerate(self.c_axis)
        ]
        return ["C", "secondAxis", "maxAbsG"], rows


def _implicit_numbers(plane: Plane, C: np.ndarray, value: float) -> np.ndarray:
    """D (or P) along a row of fixed second-axis value."""
    match plane:
        case Plane.CD | Plane.CP:
            return np.full_like(C, value)
        case Plane.CE:
            return C**2 / value
        case Plane.CEP:
            return C / value


def scan(spec: ScanSpec, threads: int | None = None) -> VonNeumannMap:
    threads = settings.threads if threads is None else threads
    tableau = build_method(spec.method, reduce=True)
    theta = wavenumber_angles(spec.wavenumbers)
    advection, implicit = spec.advection, spec.implicit_stencil
    dispersive = spec.plane.dispersive
    c_axis, second_axis = spec.axes()

    def amplification(C, numbers) -> np.ndarray:
        return max_amplification(tableau, advection, implicit, C, numbers, theta, dispersive=dispersive)

    def row(value: float) -> np.ndarray:
        return amplification(c_axis, _implicit_numbers(spec.plane, c_axis, value))

    def limit_at(C: float) -> float:
        return float(amplification(C, 0.0))

    def column_at(value: float) -> float:
        C = np.asarray(c_axis[-1])
        return float(amplification(C, _implicit_numbers(spec.plane, C, value)))

    logger.info(
        "Start von Neumann scan %s on %dx%d with n0=%d",
        spec.label,
        spec.resolution,
        spec.resolution,
        spec.wavenumbers,
    )
    values = np.array(RowWorkerPool(threads).map(row, list(second_axis)))
    result = VonNeumannMap(
        spec=spec, c_axis=c_axis, second_axis=second_axis, values=values, limit=amplification(c_axis, 0.0)
    )
    result.borders.update(extract_borders(result, limit_at=limit_at, column_at=column_at))
    return result


def _bisect(evaluate: Callable[[float], float], stable: float, unstable: float, log: bool) -> float:
    threshold = 1.0 + settings.amplification_tolerance
    for _ in range(BISECTION_STEPS):
        middle = float(np.sqrt(stable * unstable)) if log else 0.5 * (stable + unstable)
        if evaluate(middle) <= threshold:
            stable = middle
        else:
            unstable = middle
    return stable


def _border(
    axis: np.ndarray,
    stable: np.ndarray,
    evaluate: Callable[[float], float] | None = None,
    log: bool = False,
) -> Border:
    """End of the stable run that starts at axis[0], bisected between grid points when `evaluate` is given."""
    if not stable[0]:
        return Border(value=None, valid=False)
    if stable.all():
        return Border(value=float(axis[-1]), valid=False)
    run = int(np.argmin(stable))
    value = float(axis[run - 1])
    if evaluate is not None:
        value = _bisect(evaluate, value, float(axis[run]), log)
    return Border(value=value, valid=True)


def extract_borders(
    vn_map: VonNeumannMap,
    limit_at: Callable[[float], float] | None = None,
    column_at: Callable[[float], float] | None = None,
) -> dict[str, Border]:
    """C0 as the E -> infinity asymptote and the second-axis border at the largest scanned C.

    C0 is read from `vn_map.limit` (the implicit term switched off), or from
    the row closest to it when the map carries none. The second-axis border
    is the end of the stable run in the last column, counted from the side
    where the implicit term dominates. `limit_at` and `column_at` evaluate
    max |g| off the grid and refine both borders by bisection. A border at a
    range edge, or none at all, is flagged invalid.
    """
    plane = vn_map.spec.plane
    stable = vn_map.stable
    if vn_map.limit is not None:
        limit_stable = vn_map.limit <= 1.0 + settings.amplification_tolerance
    else:
        limit_stable = stable[0 if plane.implicit_grows else -1]
    column = stable[:, -1]
    second_axis = vn_map.second_axis
    if plane.implicit_grows:
        column, second_axis = column[::-1], second_axis[::-1]
    return {
        "C0": _border(vn_map.c_axis, limit_stable, limit_at),
        f"{plane.second_axis}0": _border(second_axis, column, column_at, log=True),
    }
