"""Periodic 1D advection-diffusion and advection-dispersion on [0, 2pi]."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from app.core.errors import ConfigurationError
from app.core.logging import get_logger
from app.stencils import Stencil

logger = get_logger(__name__)

DOMAIN_LENGTH = 2 * np.pi


class PdeKind(str, enum.Enum):
    DIFFUSION = "diffusion"
    DISPERSION = "dispersion"


@dataclass(frozen=True)
class PeriodicProblem:
    """u_t + a u_x = d u_xx, or u_t + a u_x + beta u_xxx = 0, with u(0, x) = sin x."""

    J: int
    a: float = 1.0
    d: float = 0.0
    beta: float = 0.0
    kind: PdeKind = PdeKind.DIFFUSION

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "kind", PdeKind(self.kind))
        except ValueError:
            raise ConfigurationError(f"unknown PDE kind {self.kind!r}") from None
        if self.J < 4:
            raise ConfigurationError(f"need at least 4 cells, got J={self.J}")
        if self.d < 0:
            raise ConfigurationError(f"diffusion coefficient must be non-negative, got {self.d}")
        if self.kind is PdeKind.DIFFUSION and self.beta:
            raise ConfigurationError("a diffusion problem takes d, not beta")
        if self.kind is PdeKind.DISPERSION and self.d:
            raise ConfigurationError("a dispersion problem takes beta, not d")

    @property
    def dx(self) -> float:
        return DOMAIN_LENGTH / self.J

    @cached_property
    def x(self) -> np.ndarray:
        return self.dx * np.arange(self.J)

    @cached_property
    def u0(self) -> np.ndarray:
        return np.sin(self.x)

    def exact(self, t: float) -> np.ndarray:
        if self.kind is PdeKind.DIFFUSION:
            return np.exp(-self.d * t) * np.sin(self.x - self.a * t)
        return np.sin(self.x - (self.a - self.beta) * t)

    def l2_error(self, u: np.ndarray, t: float) -> float:
        return float(np.sqrt(self.dx * np.sum((u - self.exact(t)) ** 2)))


def advection_dispersion_problem(J: int, a: float = 1.0, beta: float = 0.0) -> PeriodicProblem:
    return PeriodicProblem(J=J, a=a, beta=beta, kind=PdeKind.DISPERSION)


def _first_row(stencil: Stencil, J: int, scale: float) -> np.ndarray:
    row = np.zeros(J)
    np.add.at(row, stencil.offsets % J, scale * stencil.coefficients)
    return row


def _apply(row: np.ndarray, offsets: np.ndarray, u: np.ndarray) -> np.ndarray:
    result = np.zeros_like(u)
    for k in offsets:
        result += row[k] * np.roll(u, -k)
    return result


def _dense(row: np.ndarray) -> np.ndarray:
    J = row.size
    index = (np.arange(J)[None, :] - np.arange(J)[:, None]) % J
    return row[index]


@dataclass(frozen=True, eq=False)
class SemiDiscretization:
    """du/dt = L_I u + L_E u with circulant operators given by their first rows.

    Row j of each operator is the first row rotated j places to the right.
    """

    problem: PeriodicProblem
    advection: Stencil
    implicit_stencil: Stencil
    explicit_row: np.ndarray
    implicit_row: np.ndarray

    @property
    def u0(self) -> np.ndarray:
        return self.problem.u0

    @property
    def dimension(self) -> int:
        return self.problem.J

    @cached_property
    def _explicit_offsets(self) -> np.ndarray:
        return np.unique(self.advection.offsets % self.problem.J)

    @cached_property
    def _implicit_offsets(self) -> np.ndarray:
        return np.unique(self.implicit_stencil.offsets % self.problem.J)

    def stiff(self, u: np.ndarray) -> np.ndarray:
        return _apply(self.implicit_row, self._implicit_offsets, u)

    def nonstiff(self, u: np.ndarray) -> np.ndarray:
        return _apply(self.explicit_row, self._explicit_offsets, u)

    def stiff_matrix(self) -> np.ndarray:
        return _dense(self.implicit_row)

    def nonstiff_matrix(self) -> np.ndarray:
        return _dense(self.explicit_row)

    def stiff_jacobian(self, u: np.ndarray) -> np.ndarray:
        return self.stiff_matrix()

    def nonstiff_jacobian(self, u: np.ndarray) -> np.ndarray:
        return self.nonstiff_matrix()

    def spectrum(self, k) -> tuple[np.ndarray, np.ndarray]:
        """Scaled stencil symbols (implicit, explicit) at the grid wavenumbers k."""
        theta = 2 * np.pi * np.asarray(k, dtype=float) / self.problem.J
        dx = self.problem.dx
        explicit = -self.problem.a / dx * self.advection.symbol(theta)
        if self.problem.kind is PdeKind.DIFFUSION:
            implicit = self.problem.d / dx**2 * self.implicit_stencil.symbol(theta)
        else:
            implicit = -self.problem.beta / dx**3 * self.implicit_stencil.symbol(theta)
        return implicit, explicit


def semidiscretize(problem: PeriodicProblem, adv: Stencil, implicit: Stencil) -> SemiDiscretization:
    expected = 2 if problem.kind is PdeKind.DIFFUSION else 3
    if adv.d != 1 or implicit.d != expected:
        raise ConfigurationError(
            f"{problem.kind.value} needs derivative orders (1, {expected}), got ({adv.d}, {implicit.d})"
        )
    for stencil in (adv, implicit):
        if stencil.width >= problem.J:
            raise ConfigurationError(f"stencil of width {stencil.width} does not fit J={problem.J}")
    dx = problem.dx
    if problem.kind is PdeKind.DIFFUSION:
        implicit_scale = problem.d / dx**2
    else:
        implicit_scale = -problem.beta / dx**3
    logger.debug("Semi-discretize %s on J=%d", problem.kind.value, problem.J)
    return SemiDiscretization(
        problem=problem,
        advection=adv,
        implicit_stencil=implicit,
        explicit_row=_first_row(adv, problem.J, -problem.a / dx),
        implicit_row=_first_row(implicit, problem.J, implicit_scale),
    )
