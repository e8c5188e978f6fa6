"""Direct DeC/sDeC and ADER iterations.

For linear problems these reproduce the corresponding unreduced tableau
exactly; nonlinear stiff terms are linearized once per step at u_n.
"""

from __future__ import annotations

import warnings

import numpy as np

from app.core.errors import MethodError, SingularStageError, StepRestrictionWarning
from app.core.logging import get_logger
from app.integrator.problems import SplitProblem
from app.quadrature import ADEROperators, DeCCoefficients
from app.tableaux import Family, MethodSpec, Mode, correction_operators

logger = get_logger(__name__)


class _SplitEvaluator:
    """Implicit and explicit right-hand sides of a step, as chosen by the mode."""

    def __init__(self, ode: SplitProblem, mode: Mode, u: np.ndarray) -> None:
        self.ode = ode
        self.mode = mode
        self.u = u
        match mode:
            case Mode.EXPLICIT:
                self.jacobian = np.zeros((u.size, u.size))
            case Mode.IMPLICIT:
                self.jacobian = ode.stiff_jacobian(u) + ode.nonstiff_jacobian(u)
            case Mode.IMEX:
                self.jacobian = ode.stiff_jacobian(u)
        self.offset = self.implicit(u) - self.jacobian @ u

    def implicit(self, v: np.ndarray) -> np.ndarray:
        match self.mode:
            case Mode.EXPLICIT:
                return np.zeros_like(v)
            case Mode.IMPLICIT:
                return self.ode.stiff(v) + self.ode.nonstiff(v)
            case Mode.IMEX:
                return self.ode.stiff(v)

    def linearized(self, v: np.ndarray) -> np.ndarray:
        return self.offset + self.jacobian @ v

    def explicit(self, v: np.ndarray) -> np.ndarray:
        match self.mode:
            case Mode.EXPLICIT:
                return self.ode.stiff(v) + self.ode.nonstiff(v)
            case Mode.IMPLICIT:
                return np.zeros_like(v)
            case Mode.IMEX:
                return self.ode.nonstiff(v)

    def total(self, v: np.ndarray) -> np.ndarray:
        return self.ode.stiff(v) + self.ode.nonstiff(v)


def _guard(dt: float, bound: float, what: str) -> None:
    if dt >= bound:
        warnings.warn(
            f"dt={dt:.6g} exceeds the {what} contraction bound {bound:.6g}",
            StepRestrictionWarning,
            stacklevel=3,
        )


def _solve(matrix: np.ndarray, rhs: np.ndarray, stage: str, dt: float) -> np.ndarray:
    try:
        return np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exception:
        raise SingularStageError(stage=stage, dt=dt) from exception


def dec_iterate(
    coeffs: DeCCoefficients,
    spec: MethodSpec,
    ode: SplitProblem,
    u: np.ndarray,
    dt: float,
    check_step: bool = False,
) -> np.ndarray:
    if spec.family not in (Family.DEC, Family.SDEC):
        raise MethodError(f"{spec.label} is not a deferred correction method")
    u = np.asarray(u, dtype=float)
    theta = coeffs.theta
    gamma_implicit, gamma_explicit = correction_operators(coeffs, spec.family)
    if spec.mode is Mode.EXPLICIT:
        gamma_implicit = np.zeros_like(gamma_implicit)
    elif spec.mode is Mode.IMPLICIT:
        gamma_explicit = np.zeros_like(gamma_explicit)
    rhs_split = _SplitEvaluator(ode, spec.mode, u)
    if check_step and spec.mode is not Mode.EXPLICIT:
        lipschitz = float(np.linalg.norm(rhs_split.jacobian, 2))
        if lipschitz > 0:
            _guard(dt, 1.0 / (2.0 * float(np.max(coeffs.beta)) * lipschitz), "DeC")

    size = coeffs.M + 1
    identity = np.eye(u.size)
    previous = [u.copy() for _ in range(size)]
    for k in range(1, spec.K + 1):
        total_prev = [rhs_split.total(v) for v in previous]
        linear_prev = [rhs_split.linearized(v) for v in previous]
        explicit_prev = [rhs_split.explicit(v) for v in previous]
        current: list[np.ndarray] = []
        linear_new: list[np.ndarray] = []
        explicit_new: list[np.ndarray] = []
        for m in range(size):
            rhs = u + dt * sum(theta[m, r] * total_prev[r] for r in range(size))
            rhs = rhs - dt * sum(gamma_implicit[m, j] * linear_prev[j] for j in range(size))
            rhs = rhs - dt * sum(gamma_explicit[m, j] * explicit_prev[j] for j in range(size))
            rhs = rhs + dt * sum(gamma_implicit[m, j] * linear_new[j] for j in range(m))
            rhs = rhs + dt * sum(gamma_explicit[m, j] * explicit_new[j] for j in range(m))
            diagonal = gamma_implicit[m, m]
            if diagonal:
                matrix = identity - dt * diagonal * rhs_split.jacobian
                value = _solve(matrix, rhs + dt * diagonal * rhs_split.offset, f"k={k},m={m}", dt)
            else:
                value = rhs
            current.append(value)
            linear_new.append(rhs_split.linearized(value))
            explicit_new.append(rhs_split.explicit(value))
        previous = current
    return previous[-1]


def ader_iterate(
    ops: ADEROperators,
    spec: MethodSpec,
    ode: SplitProblem,
    u: np.ndarray,
    dt: float,
    check_step: bool = False,
) -> np.ndarray:
    if spec.family is not Family.ADER:
        raise MethodError(f"{spec.label} is not an ader method")
    u = np.asarray(u, dtype=float)
    Q = np.asarray(ops.Q)
    size = ops.M + 1
    rhs_split = _SplitEvaluator(ode, spec.mode, u)
    if check_step and spec.mode is not Mode.EXPLICIT:
        lipschitz = float(np.linalg.norm(rhs_split.jacobian, 2))
        if lipschitz > 0:
            _guard(dt, 1.0 / (2.0 * float(np.linalg.norm(Q, 2)) * lipschitz), "ADER")

    initial = np.tile(u, (size, 1))
    coefficients = lagged_coefficients = initial
    if spec.mode is Mode.EXPLICIT:
        for _ in range(spec.K):
            lagged_coefficients = coefficients
            coefficients = initial + dt * Q @ np.array([rhs_split.explicit(v) for v in coefficients])
    else:
        matrix = np.eye(size * u.size) - dt * np.kron(Q, rhs_split.jacobian)
        # implicit mode has no lagged term, so one solve replaces all K iterations
        iterations = spec.K if spec.mode is Mode.IMEX else 1
        base = initial + dt * Q @ np.tile(rhs_split.offset, (size, 1))
        for k in range(1, iterations + 1):
            lagged_coefficients = coefficients
            lagged = np.array([rhs_split.explicit(v) for v in coefficients])
            rhs = base + dt * Q @ lagged
            coefficients = _solve(matrix, rhs.ravel(), f"k={k}", dt).reshape(size, u.size)
    # right-end reconstruction: the explicit term stays one iteration behind
    implicit = np.array([rhs_split.implicit(v) for v in coefficients])
    explicit = np.array([rhs_split.explicit(v) for v in lagged_coefficients])
    return u + dt * ops.b @ (implicit + explicit)
