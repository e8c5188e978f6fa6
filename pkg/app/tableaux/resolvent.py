"""Vectorized evaluation of R = 1 + sum_p z_p b_p^T (I - sum_p z_p A_p)^-1 1.

One call evaluates many arguments at once by block forward substitution
over the stages, so scans cost O(Z^2) per point instead of a dense solve.
"""

from __future__ import annotations

import numpy as np

from app.tableaux.butcher import ButcherTableau, IMEXTableau, stage_blocks

CHUNK_SIZE = 1 << 16


class StageResolvent:
    def __init__(self, tableau: ButcherTableau | IMEXTableau) -> None:
        parts = tableau.parts()
        self.matrices = [np.asarray(part.A) for part in parts]
        self.weights = [np.asarray(part.b) for part in parts]
        self.blocks = stage_blocks(*self.matrices)
        self.Z = tableau.Z

    def __call__(self, *arguments) -> np.ndarray:
        if len(arguments) != len(self.matrices):
            raise TypeError(f"expected {len(self.matrices)} arguments, got {len(arguments)}")
        shaped = np.broadcast_arrays(*[np.asarray(z, dtype=complex) for z in arguments])
        shape = shaped[0].shape
        z = [np.ravel(values) for values in shaped]
        total = z[0].size
        values = np.empty(total, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for start in range(0, total, CHUNK_SIZE):
                chunk = slice(start, start + CHUNK_SIZE)
                values[chunk] = self._evaluate([zp[chunk] for zp in z])
        values[~np.isfinite(values)] = np.inf
        return values.reshape(shape)

    def _evaluate(self, z: list[np.ndarray]) -> np.ndarray:
        N = z[0].size
        stages = np.zeros((self.Z, N), dtype=complex)
        for start, stop in self.blocks:
            rhs = np.ones((stop - start, N), dtype=complex)
            if start:
                for A, zp in zip(self.matrices, z):
                    coupling = A[start:stop, :start]
                    if coupling.any():
                        rhs += zp * (coupling @ stages[:start])
            diagonal = [A[start:stop, start:stop] for A in self.matrices]
            if not any(block.any() for block in diagonal):
                stages[start:stop] = rhs
            elif stop - start == 1:
                pivot = 1.0 - sum(zp * block[0, 0] for zp, block in zip(z, diagonal))
                stages[start] = rhs[0] / pivot
            else:
                stages[start:stop] = _block_solve(diagonal, z, rhs)
        result = np.ones(N, dtype=complex)
        for b, zp in zip(self.weights, z):
            result += zp * (b @ stages)
        return result


def _block_solve(diagonal: list[np.ndarray], z: list[np.ndarray], rhs: np.ndarray) -> np.ndarray:
    size = rhs.shape[0]
    matrices = np.broadcast_to(np.eye(size, dtype=complex), (rhs.shape[1], size, size)).copy()
    for block, zp in zip(diagonal, z):
        matrices -= zp[:, None, None] * block[None]
    try:
        return np.linalg.solve(matrices, rhs.T[..., None])[..., 0].T
    except np.linalg.LinAlgError:
        # a pole somewhere in the batch; solve point by point and mark the poles
        solution = np.full_like(rhs, np.inf)
        for i in range(rhs.shape[1]):
            try:
                solution[:, i] = np.linalg.solve(matrices[i], rhs[:, i])
            except np.linalg.LinAlgError:
                continue
        return solution


def stability_values(tableau: ButcherTableau | IMEXTableau, *arguments) -> np.ndarray:
    return StageResolvent(tableau)(*arguments)
