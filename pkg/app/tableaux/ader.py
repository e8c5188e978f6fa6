"""ADER methods as Runge-Kutta tableaux.

Stage 0 is u_n, stage 1 + (k-1)(M+1) + m is the m-th nodal value after
iteration k. Iteration k solves

    a^(k) = 1 u_n + dt Q S(a^(k)) + dt Q G(a^(k-1)),    a^(0) = 1 u_n,

and the step ends with the reconstruction at the right end of the step,

    phi(1)^T a^(K) = u_n + dt b^T S(a^(K)) + dt b^T G(a^(K-1)),

so the explicit weights sit one block before the implicit ones.
"""

from __future__ import annotations

import numpy as np

from app.core.errors import MethodError
from app.core.logging import get_logger
from app.quadrature import ADEROperators
from app.tableaux.butcher import ButcherTableau, IMEXTableau
from app.tableaux.method import Family, MethodSpec, Mode

logger = get_logger(__name__)


def _block(k: int, size: int) -> slice:
    return slice(1 + (k - 1) * size, 1 + k * size)


def _explicit_part(ops: ADEROperators, K: int) -> np.ndarray:
    size = ops.M + 1
    A = np.zeros((1 + K * size, 1 + K * size))
    A[_block(1, size), 0] = ops.P
    for k in range(2, K + 1):
        A[_block(k, size), _block(k - 1, size)] = ops.Q
    return A


def _implicit_part(ops: ADEROperators, K: int) -> np.ndarray:
    size = ops.M + 1
    A = np.zeros((1 + K * size, 1 + K * size))
    for k in range(1, K + 1):
        A[_block(k, size), _block(k, size)] = ops.Q
    return A


def _weights(ops: ADEROperators, K: int, k: int) -> np.ndarray:
    """b on the nodal stages of iteration k; iteration 0 is the constant u_n."""
    size = ops.M + 1
    b = np.zeros(1 + K * size)
    if k == 0:
        b[0] = ops.b.sum()
    else:
        b[_block(k, size)] = ops.b
    return b


def ader_block_tableau(ops: ADEROperators) -> ButcherTableau:
    """The single implicit block A = Q, b = b shared by all implicit ADER iterations."""
    return ButcherTableau(A=ops.Q, b=ops.b, label=f"ader-block-{ops.nodes.kind.short}-M{ops.M}")


def ader_tableau(ops: ADEROperators, spec: MethodSpec) -> ButcherTableau | IMEXTableau:
    if spec.family is not Family.ADER:
        raise MethodError(f"{spec.label} is not an ader method")
    if ops.nodes.kind is not spec.kind or ops.M != spec.M:
        raise MethodError(
            f"operators for {ops.nodes.kind.value} M={ops.M} do not match {spec.label} (M={spec.M})"
        )
    K = spec.K
    implicit_b = _weights(ops, K, K)
    explicit_b = _weights(ops, K, K - 1)
    logger.debug("Build %s tableau with %d stages", spec.label, implicit_b.size)
    match spec.mode:
        case Mode.EXPLICIT:
            return ButcherTableau(A=_explicit_part(ops, K), b=explicit_b, label=spec.label)
        case Mode.IMPLICIT:
            return ButcherTableau(A=_implicit_part(ops, K), b=implicit_b, label=spec.label)
        case Mode.IMEX:
            return IMEXTableau(
                implicit=ButcherTableau(A=_implicit_part(ops, K), b=implicit_b, label=spec.label),
                explicit=ButcherTableau(A=_explicit_part(ops, K), b=explicit_b, label=spec.label),
                label=spec.label,
            )
