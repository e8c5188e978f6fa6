"""Split ODE systems du/dt = S(u) + G(u): S is treated implicitly, G explicitly."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np

from app.core.errors import ConfigurationError
from app.core.logging import get_logger

logger = get_logger(__name__)

JACOBIAN_TOLERANCE = 1e-5

VectorField = Callable[[np.ndarray], np.ndarray]


@runtime_checkable
class SplitProblem(Protocol):
    u0: np.ndarray

    @property
    def dimension(self) -> int: ...

    def stiff(self, u: np.ndarray) -> np.ndarray: ...

    def nonstiff(self, u: np.ndarray) -> np.ndarray: ...

    def stiff_jacobian(self, u: np.ndarray) -> np.ndarray: ...

    def nonstiff_jacobian(self, u: np.ndarray) -> np.ndarray: ...


@runtime_checkable
class LinearSplitProblem(SplitProblem, Protocol):
    """A split problem whose parts are linear operators with known matrices."""

    def stiff_matrix(self) -> np.ndarray: ...

    def nonstiff_matrix(self) -> np.ndarray: ...


def _vector(values) -> np.ndarray:
    return np.atleast_1d(np.asarray(values, dtype=float))


@dataclass(frozen=True, eq=False)
class SplitLinearODE:
    S: np.ndarray
    G: np.ndarray
    u0: np.ndarray

    def __post_init__(self) -> None:
        S = np.atleast_2d(np.asarray(self.S, dtype=float))
        G = np.atleast_2d(np.asarray(self.G, dtype=float))
        u0 = _vector(self.u0)
        if S.shape != G.shape or S.shape != (u0.size, u0.size):
            raise ConfigurationError(
                f"split operators S{S.shape} and G{G.shape} do not match a state of size {u0.size}"
            )
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "u0", u0)

    @property
    def dimension(self) -> int:
        return self.u0.size

    def stiff(self, u: np.ndarray) -> np.ndarray:
        return self.S @ u

    def nonstiff(self, u: np.ndarray) -> np.ndarray:
        return self.G @ u

    def stiff_jacobian(self, u: np.ndarray) -> np.ndarray:
        return self.S

    def nonstiff_jacobian(self, u: np.ndarray) -> np.ndarray:
        return self.G

    def stiff_matrix(self) -> np.ndarray:
        return self.S

    def nonstiff_matrix(self) -> np.ndarray:
        return self.G


def central_difference_jacobian(vector_field: VectorField, u: np.ndarray) -> np.ndarray:
    u = _vector(u)
    columns = []
    for j in range(u.size):
        step = 1e-6 * max(1.0, abs(u[j]))
        shift = np.zeros_like(u)
        shift[j] = step
        columns.append((vector_field(u + shift) - vector_field(u - shift)) / (2 * step))
    return np.column_stack(columns)


@dataclass(frozen=True, eq=False)
class LinearizedODE:
    """Nonlinear stiff part S with Jacobian; implicit stages use S(u_n) + S'(u_n)(v - u_n)."""

    stiff_map: VectorField
    jacobian: Callable[[np.ndarray], np.ndarray]
    u0: np.ndarray
    nonstiff_map: VectorField | None = None
    nonstiff_jacobian_map: Callable[[np.ndarray], np.ndarray] | None = None
    validate: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "u0", _vector(self.u0))
        if self.validate:
            self._check_jacobian()

    def _check_jacobian(self) -> None:
        analytic = np.atleast_2d(self.jacobian(self.u0))
        numeric = central_difference_jacobian(self.stiff, self.u0)
        scale = max(float(np.linalg.norm(analytic)), 1.0)
        deviation = float(np.linalg.norm(analytic - numeric)) / scale
        logger.debug("Jacobian check deviation %.3e", deviation)
        if deviation > JACOBIAN_TOLERANCE:
            raise ConfigurationError(
                f"Jacobian disagrees with central differences at u0 (relative {deviation:.3e})"
            )

    @property
    def dimension(self) -> int:
        return self.u0.size

    def stiff(self, u: np.ndarray) -> np.ndarray:
        return _vector(self.stiff_map(u))

    def nonstiff(self, u: np.ndarray) -> np.ndarray:
        if self.nonstiff_map is None:
            return np.zeros_like(u, dtype=float)
        return _vector(self.nonstiff_map(u))

    def stiff_jacobian(self, u: np.ndarray) -> np.ndarray:
        return np.atleast_2d(self.jacobian(u))

    def nonstiff_jacobian(self, u: np.ndarray) -> np.ndarray:
        if self.nonstiff_map is None:
            return np.zeros((u.size, u.size))
        if self.nonstiff_jacobian_map is None:
            return central_difference_jacobian(self.nonstiff, u)
        return np.atleast_2d(self.nonstiff_jacobian_map(u))


@dataclass(frozen=True, eq=False)
class ReferenceProblem:
    name: str
    ode: SplitProblem
    exact: Callable[[float], np.ndarray] | None = None
    t_end: float = 1.0


def dahlquist(lam_implicit: float = -0.5, lam_explicit: float = -0.5) -> ReferenceProblem:
    lam = lam_implicit + lam_explicit
    return ReferenceProblem(
        name="dahlquist",
        ode=SplitLinearODE(S=[[lam_implicit]], G=[[lam_explicit]], u0=[1.0]),
        exact=lambda t: np.array([np.exp(lam * t)]),
    )


def scalar_stiff(lam: float = -1e3) -> ReferenceProblem:
    return ReferenceProblem(
        name="scalar-stiff",
        ode=SplitLinearODE(S=[[lam]], G=[[0.0]], u0=[1.0]),
        exact=lambda t: np.array([np.exp(lam * t)]),
        t_end=10.0,
    )


def stiff_oscillator() -> ReferenceProblem:
    """y'' = -2y' - 2501y, y(0) = 1, y'(0) = 0, as the state (y', y).

    The fast rotation (frequency 50) is implicit, the damping -2y' explicit.
    """

    def exact(t: float) -> np.ndarray:
        decay = np.exp(-t)
        return np.array(
            [
                -2501.0 / 50.0 * decay * np.sin(50.0 * t),
                decay * (np.sin(50.0 * t) / 50.0 + np.cos(50.0 * t)),
            ]
        )

    return ReferenceProblem(
        name="stiff-oscillator",
        ode=SplitLinearODE(
            S=[[0.0, -2501.0], [1.0, 0.0]],
            G=[[-2.0, 0.0], [0.0, 0.0]],
            u0=[0.0, 1.0],
        ),
        exact=exact,
        t_end=10.0,
    )


def nonlinear_stiff(stiffness: float = 1e6, y0: float = 1e-3) -> ReferenceProblem:
    """y' = -k|y|y + 1 with Jacobian -2k|y|; y = 1/sqrt(k) is its attracting equilibrium."""
    equilibrium = 1.0 / np.sqrt(stiffness)
    exact = None
    if np.isclose(y0, equilibrium, rtol=1e-14, atol=0.0):
        exact = lambda t: np.array([equilibrium])  # noqa: E731
    return ReferenceProblem(
        name="nonlinear-stiff",
        ode=LinearizedODE(
            stiff_map=lambda u: -stiffness * np.abs(u) * u + 1.0,
            jacobian=lambda u: np.diag(-2.0 * stiffness * np.abs(u)),
            u0=[y0],
        ),
        exact=exact,
        t_end=1.0,
    )


REFERENCE_PROBLEMS: dict[str, Callable[[], ReferenceProblem]] = {
    "dahlquist": dahlquist,
    "scalar-stiff": scalar_stiff,
    "stiff-oscillator": stiff_oscillator,
    "nonlinear-stiff": nonlinear_stiff,
}
