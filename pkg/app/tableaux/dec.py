"""DeC and sDeC methods written as Runge-Kutta tableaux.

Both families iterate

    L1(a^(k)) = L1(a^(k-1)) - L2(a^(k-1)),    a^(0) = u_n,

and differ only in the low-order operator L1. In cumulative form every
subtimestep m reads

    a^{m,(k)} - dt sum_j GI[m,j] S(a^{j,(k)}) - dt sum_j GE[m,j] G(a^{j,(k)})
        = u_n + dt sum_r theta[m,r] F(a^{r,(k-1)})
              - dt sum_j GI[m,j] S(a^{j,(k-1)}) - dt sum_j GE[m,j] G(a^{j,(k-1)})

so one builder serves both families once the correction matrices GI
(implicit) and GE (explicit) are known.
"""

from __future__ import annotations

import numpy as np

from app.core.config import settings
from app.core.errors import MethodError
from app.core.logging import get_logger
from app.quadrature import DeCCoefficients
from app.tableaux.butcher import ButcherTableau, IMEXTableau
from app.tableaux.method import Family, MethodSpec, Mode

logger = get_logger(__name__)


def correction_operators(coeffs: DeCCoefficients, family: Family) -> tuple[np.ndarray, np.ndarray]:
    """Implicit and explicit L1 matrices (cumulative form) of a DeC family.

    DeC takes implicit/explicit Euler steps from u_n over [0, t_m]; sDeC
    takes them from the previous subnode over [t_{m-1}, t_m].
    """
    size = coeffs.M + 1
    match family:
        case Family.DEC:
            # the explicit Euler step from u_n only touches a^0 = u_n, which the
            # right-hand side cancels, so its matrix vanishes
            return np.diag(coeffs.beta), np.zeros((size, size))
        case Family.SDEC:
            gamma = coeffs.gamma
            implicit = np.tril(np.tile(gamma, (size, 1)))
            explicit = np.zeros((size, size))
            for m in range(1, size):
                explicit[m, :m] = gamma[1 : m + 1]
            return implicit, explicit
        case _:
            raise MethodError(f"{family.value} is not a deferred correction family")


def _part_matrix(
    theta: np.ndarray, beta: np.ndarray, gamma: np.ndarray, K: int
) -> np.ndarray:
    """Full unreduced stage matrix of one operator part.

    Stage 0 is u_n, stage 1 + (k-1)(M+1) + m is a^{m,(k)} for k = 1..K.
    """
    size = beta.size
    Z = 1 + K * size
    A = np.zeros((Z, Z))
    first_column = beta - gamma.sum(axis=1)
    first_column[np.abs(first_column) < settings.reduction_tolerance] = 0.0
    for k in range(1, K + 1):
        rows = slice(1 + (k - 1) * size, 1 + k * size)
        A[rows, rows] = gamma
        if k == 1:
            A[rows, 0] = first_column
        else:
            A[rows, 1 + (k - 2) * size : 1 + (k - 1) * size] = theta - gamma
    return A


def _final_block_stages(parts: list[np.ndarray], size: int, include_last: bool) -> list[int]:
    """Stages of the last iteration the final value depends on, last stage included on request."""
    Z = parts[0].shape[0]
    block = range(Z - size, Z)
    needed = {Z - 1} if include_last else set()
    frontier = [Z - 1]
    while frontier:
        row = frontier.pop()
        for A in parts:
            for column in block:
                if A[row, column] != 0 and column not in needed:
                    needed.add(column)
                    frontier.append(column)
    return sorted(needed)


def _assemble(
    coeffs: DeCCoefficients, spec: MethodSpec, gamma_implicit: np.ndarray, gamma_explicit: np.ndarray
) -> ButcherTableau | IMEXTableau:
    theta, beta = coeffs.theta, coeffs.beta
    size = coeffs.M + 1
    K = spec.K
    match spec.mode:
        case Mode.EXPLICIT:
            parts = [_part_matrix(theta, beta, gamma_explicit, K)]
        case Mode.IMPLICIT:
            parts = [_part_matrix(theta, beta, gamma_implicit, K)]
        case Mode.IMEX:
            parts = [
                _part_matrix(theta, beta, gamma_implicit, K),
                _part_matrix(theta, beta, gamma_explicit, K),
            ]
    explicit_only = spec.mode is Mode.EXPLICIT
    Z_full = parts[0].shape[0]
    keep = list(range(Z_full - size)) + _final_block_stages(parts, size, not explicit_only)
    # explicit rows never reach themselves, so there the final row only supplies b
    weights = [A[Z_full - 1, keep] for A in parts]
    matrices = [A[np.ix_(keep, keep)] for A in parts]
    tableaux = [ButcherTableau(A=A, b=b, label=spec.label) for A, b in zip(matrices, weights)]
    logger.debug("Build %s tableau with %d stages", spec.label, tableaux[0].Z)
    if spec.mode is Mode.IMEX:
        return IMEXTableau(implicit=tableaux[0], explicit=tableaux[1], label=spec.label)
    return tableaux[0]


def _check(coeffs: DeCCoefficients, spec: MethodSpec, family: Family) -> None:
    if spec.family is not family:
        raise MethodError(f"{spec.label} is not a {family.value} method")
    if coeffs.nodes.kind is not spec.kind or coeffs.M != spec.M:
        raise MethodError(
            f"coefficients for {coeffs.nodes.kind.value} M={coeffs.M} do not match {spec.label} (M={spec.M})"
        )


def dec_tableau(coeffs: DeCCoefficients, spec: MethodSpec) -> ButcherTableau | IMEXTableau:
    _check(coeffs, spec, Family.DEC)
    return _assemble(coeffs, spec, *correction_operators(coeffs, Family.DEC))


def sdec_tableau(coeffs: DeCCoefficients, spec: MethodSpec) -> ButcherTableau | IMEXTableau:
    _check(coeffs, spec, Family.SDEC)
    return _assemble(coeffs, spec, *correction_operators(coeffs, Family.SDEC))
