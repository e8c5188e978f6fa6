"""Generic Runge-Kutta / IMEX stepping for linear split problems.

Stages are grouped into the smallest coupled blocks; each block is one
dense solve whose LU factors are cached per (block coefficients, dt).
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from app.core.errors import ConfigurationError, MethodError, SingularStageError
from app.core.logging import get_logger
from app.integrator.problems import LinearSplitProblem, SplitProblem
from app.tableaux import ButcherTableau, IMEXTableau, stage_blocks

logger = get_logger(__name__)


class RungeKuttaStepper:
    def __init__(self, tableau: ButcherTableau | IMEXTableau, problem: SplitProblem) -> None:
        if not isinstance(problem, LinearSplitProblem):
            raise MethodError(
                "tableau stepping needs linear operators; use the iteration strategy for linearized problems"
            )
        self.tableau = tableau
        self.problem = problem
        if isinstance(tableau, IMEXTableau):
            self.stiff_part, self.nonstiff_part = tableau.implicit, tableau.explicit
        else:
            self.stiff_part = self.nonstiff_part = tableau
        self.blocks = stage_blocks(self.stiff_part.A, self.nonstiff_part.A)
        self._factors: dict[tuple[bytes, bytes, float], tuple] = {}
        self._S: np.ndarray | None = None
        self._G: np.ndarray | None = None

    def _matrices(self) -> tuple[np.ndarray, np.ndarray]:
        if self._S is None:
            self._S = np.asarray(self.problem.stiff_matrix(), dtype=float)
            self._G = np.asarray(self.problem.nonstiff_matrix(), dtype=float)
        return self._S, self._G

    def _factor(self, start: int, stop: int, dt: float):
        stiff_block = self.stiff_part.A[start:stop, start:stop]
        nonstiff_block = self.nonstiff_part.A[start:stop, start:stop]
        key = (stiff_block.tobytes(), nonstiff_block.tobytes(), dt)
        if key not in self._factors:
            S, G = self._matrices()
            size = (stop - start) * S.shape[0]
            matrix = np.eye(size) - dt * (np.kron(stiff_block, S) + np.kron(nonstiff_block, G))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", LinAlgWarning)
                lu, piv = lu_factor(matrix, check_finite=False)
            pivots = np.abs(np.diag(lu))
            if not np.all(np.isfinite(pivots)) or pivots.min() <= np.finfo(float).eps * pivots.max():
                raise SingularStageError(stage=start, dt=dt)
            logger.debug("Factor stage block %d:%d dt=%.6g size %d", start, stop, dt, size)
            self._factors[key] = (lu, piv)
        return self._factors[key]

    def stages(self, u: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Stage values and their stiff/non-stiff evaluations, each of shape (Z, I)."""
        if dt <= 0:
            raise ConfigurationError(f"time step must be positive, got {dt}")
        A_s, A_g = self.stiff_part.A, self.nonstiff_part.A
        Z, size = self.tableau.Z, u.size
        values = np.zeros((Z, size))
        stiff = np.zeros((Z, size))
        nonstiff = np.zeros((Z, size))
        for start, stop in self.blocks:
            rhs = np.tile(u, (stop - start, 1))
            if start:
                rhs += dt * (A_s[start:stop, :start] @ stiff[:start] + A_g[start:stop, :start] @ nonstiff[:start])
            if A_s[start:stop, start:stop].any() or A_g[start:stop, start:stop].any():
                lu, piv = self._factor(start, stop, dt)
                rhs = lu_solve((lu, piv), rhs.ravel(), check_finite=False).reshape(stop - start, size)
            values[start:stop] = rhs
            for stage in range(start, stop):
                stiff[stage] = self.problem.stiff(values[stage])
                nonstiff[stage] = self.problem.nonstiff(values[stage])
        return values, stiff, nonstiff

    def step(self, u: np.ndarray, dt: float) -> np.ndarray:
        _, stiff, nonstiff = self.stages(u, dt)
        return u + dt * (self.stiff_part.b @ stiff + self.nonstiff_part.b @ nonstiff)

    def stage_residual(self, u: np.ndarray, dt: float) -> float:
        values, stiff, nonstiff = self.stages(u, dt)
        expected = u + dt * (self.stiff_part.A @ stiff + self.nonstiff_part.A @ nonstiff)
        return float(np.max(np.abs(values - expected)))


def rk_step(
    tableau: ButcherTableau | IMEXTableau, ode: SplitProblem, u: np.ndarray, dt: float
) -> np.ndarray:
    return RungeKuttaStepper(tableau, ode).step(np.asarray(u, dtype=float), dt)
