from __future__ import annotations

import numpy as np

from app.core.config import settings
from app.core.errors import ReductionMismatchError
from app.core.logging import get_logger
from app.tableaux.butcher import ButcherTableau, IMEXTableau
from app.tableaux.resolvent import StageResolvent

logger = get_logger(__name__)

SAMPLE_COUNT = 64
SAMPLE_RADIUS = 10.0
SAMPLE_SEED = 7
AGREEMENT_TOLERANCE = 1e-10


def _merge(matrices: list[np.ndarray], weights: list[np.ndarray], source: int, target: int):
    """Let every reference to stage `source` point to stage `target`, then drop `source`."""
    for i, (A, b) in enumerate(zip(matrices, weights)):
        A[:, target] += A[:, source]
        b[target] += b[source]
        matrices[i] = np.delete(np.delete(A, source, axis=0), source, axis=1)
        weights[i] = np.delete(b, source)


def _drop(matrices: list[np.ndarray], weights: list[np.ndarray], stage: int):
    for i, (A, b) in enumerate(zip(matrices, weights)):
        matrices[i] = np.delete(np.delete(A, stage, axis=0), stage, axis=1)
        weights[i] = np.delete(b, stage)


def _row_key(matrices: list[np.ndarray], stage: int, decimals: int) -> bytes:
    rows = np.concatenate([np.round(A[stage], decimals) for A in matrices])
    rows[rows == 0] = 0.0  # -0.0 and 0.0 must compare equal
    return rows.tobytes()


def _reduce_once(matrices: list[np.ndarray], weights: list[np.ndarray], decimals: int) -> bool:
    Z = matrices[0].shape[0]

    # stages equal to u_n: all-zero rows, folded into stage 0 while it still is u_n
    first_is_initial = all(not A[0].any() for A in matrices)
    for stage in range(1, Z if first_is_initial else 0):
        if all(not A[stage].any() for A in matrices):
            _merge(matrices, weights, stage, 0)
            return True

    # stages with identical rows take identical values
    seen: dict[bytes, int] = {}
    for stage in range(Z):
        key = _row_key(matrices, stage, decimals)
        if key in seen:
            _merge(matrices, weights, stage, seen[key])
            return True
        seen[key] = stage

    # stages nobody reads
    if Z > 1:
        for stage in range(Z):
            unused = all(not b[stage] and not A[:, stage].any() for A, b in zip(matrices, weights))
            if unused:
                _drop(matrices, weights, stage)
                return True
    return False


def _max_deviation(original: ButcherTableau | IMEXTableau, reduced: ButcherTableau | IMEXTableau) -> float:
    rng = np.random.default_rng(SAMPLE_SEED)
    arguments = []
    for _ in original.parts():
        radius = SAMPLE_RADIUS * np.sqrt(rng.random(SAMPLE_COUNT))
        arguments.append(radius * np.exp(2j * np.pi * rng.random(SAMPLE_COUNT)))
    before = StageResolvent(original)(*arguments)
    after = StageResolvent(reduced)(*arguments)
    usable = np.isfinite(before) & np.isfinite(after) & (np.abs(before) < 1e8)
    if not usable.any():
        return 0.0
    scale = np.maximum(np.abs(before[usable]), 1.0)
    return float(np.max(np.abs(before[usable] - after[usable]) / scale))


def reduce_tableau(tableau: ButcherTableau | IMEXTableau) -> ButcherTableau | IMEXTableau:
    """Remove trivial and duplicate stages and drop unread ones.

    The result is checked against the input on random arguments of the
    stability function; a mismatch raises `ReductionMismatchError`.
    """
    decimals = int(round(-np.log10(settings.reduction_tolerance)))
    matrices = [np.array(part.A) for part in tableau.parts()]
    weights = [np.array(part.b) for part in tableau.parts()]
    while _reduce_once(matrices, weights, decimals):
        pass

    parts = [ButcherTableau(A=A, b=b, label=tableau.label) for A, b in zip(matrices, weights)]
    if isinstance(tableau, IMEXTableau):
        reduced = IMEXTableau(implicit=parts[0], explicit=parts[1], label=tableau.label)
    else:
        reduced = parts[0]
    if reduced.Z == tableau.Z:
        return tableau

    deviation = _max_deviation(tableau, reduced)
    if deviation > AGREEMENT_TOLERANCE:
        raise ReductionMismatchError(deviation)
    logger.debug("Reduce %s from %d to %d stages", tableau.label, tableau.Z, reduced.Z)
    return reduced
