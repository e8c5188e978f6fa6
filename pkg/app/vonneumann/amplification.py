from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from app.stencils import Stencil
from app.tableaux import IMEXTableau, StageResolvent


@dataclass(frozen=True)
class Coefficients:
    """Dimensionless numbers of a fully discrete advection-diffusion or -dispersion scheme."""

    C: float
    D: float = 0.0
    P: float = 0.0

    @classmethod
    def from_physical(
        cls, a: float, dx: float, dt: float, d: float = 0.0, beta: float = 0.0
    ) -> Coefficients:
        return cls(C=a * dt / dx, D=d * dt / dx**2, P=beta * dt / dx**3)

    @property
    def E(self) -> float:
        return self.C**2 / self.D if self.D else float("inf")

    @property
    def E_P(self) -> float:
        return self.C / self.P if self.P else float("inf")


def wavenumber_angles(count: int) -> np.ndarray:
    """theta_k = pi k / (n0 + 1), k = 0 .. n0 + 1."""
    if count < 1:
        raise ValueError(f"wavenumber count must be positive, got {count}")
    return np.pi * np.arange(count + 2) / (count + 1)


def amplification_ad(
    tableau: IMEXTableau, adv: Stencil, diff: Stencil, C: float, D: float, theta
) -> np.ndarray | complex:
    """g = R(D sigma_diff, -C sigma_adv)."""
    values = StageResolvent(tableau)(D * diff.symbol(theta), -C * adv.symbol(theta))
    return complex(values) if np.ndim(values) == 0 else values


def amplification_disp(
    tableau: IMEXTableau, adv: Stencil, disp: Stencil, C: float, P: float, theta
) -> np.ndarray | complex:
    """g = R(-P sigma_disp, -C sigma_adv)."""
    values = StageResolvent(tableau)(-P * disp.symbol(theta), -C * adv.symbol(theta))
    return complex(values) if np.ndim(values) == 0 else values


def max_amplification(
    tableau: IMEXTableau,
    adv: Stencil,
    implicit: Stencil,
    C,
    implicit_number,
    theta: np.ndarray,
    dispersive: bool = False,
) -> np.ndarray:
    """max over theta of |g| for cells (C, D) or, when `dispersive`, (C, P).

    `C` and `implicit_number` broadcast against each other; the result has
    their broadcast shape.
    """
    C, number = np.broadcast_arrays(np.asarray(C, dtype=float), np.asarray(implicit_number, dtype=float))
    sign = -1.0 if dispersive else 1.0
    implicit_z = sign * number[..., None] * implicit.symbol(theta)
    explicit_z = -C[..., None] * adv.symbol(theta)
    return np.abs(StageResolvent(tableau)(implicit_z, explicit_z)).max(axis=-1)
