"""Integrals of the Lagrange basis that define every DeC, sDeC and ADER method.

Integrals are taken with an internal Gauss-Legendre rule of M+2 points,
which is exact for every product of two basis polynomials.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from app.core.errors import ConfigurationError, SingularMassMatrixError
from app.core.logging import get_logger
from app.quadrature.lagrange import lagrange_derivative_matrix, lagrange_matrix
from app.quadrature.nodes import (
    NodeKind,
    NodeSet,
    gauss_legendre_rule,
    gauss_lobatto_rule,
    make_nodes,
)

logger = get_logger(__name__)

MASS_CONDITION_LIMIT = 1e13


class AderQuadrature(str, enum.Enum):
    # quadrature on the basis nodes: closed Newton-Cotes for equispaced, Gauss otherwise
    NODAL = "nodal"
    EXACT = "exact"

    @classmethod
    def for_nodes(cls, kind: NodeKind) -> "AderQuadrature":
        # Newton-Cotes ADER on equispaced nodes is opt-in
        return cls.EXACT if kind is NodeKind.EQUISPACED else cls.NODAL

    @classmethod
    def parse(cls, value: "str | AderQuadrature") -> "AderQuadrature":
        if isinstance(value, AderQuadrature):
            return value
        if value == "newton-cotes":
            return cls.NODAL
        try:
            return cls(value)
        except ValueError:
            raise ConfigurationError(f"unknown ADER quadrature {value!r}") from None


@dataclass(frozen=True, eq=False)
class DeCCoefficients:
    """theta[m, r] = int_0^{t_m} phi_r, delta[m, r] = int_{t_{m-1}}^{t_m} phi_r."""

    nodes: NodeSet
    theta: np.ndarray
    beta: np.ndarray
    delta: np.ndarray
    gamma: np.ndarray

    @property
    def M(self) -> int:
        return self.nodes.M


@dataclass(frozen=True, eq=False)
class ADEROperators:
    nodes: NodeSet
    quadrature: AderQuadrature
    massM: np.ndarray
    R: np.ndarray
    Q: np.ndarray
    P: np.ndarray
    b: np.ndarray
    phi0: np.ndarray
    phi1: np.ndarray
    condition_number: float

    @property
    def M(self) -> int:
        return self.nodes.M


def _frozen(values) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


def _integration_rule(M: int, extra_points: int) -> tuple[np.ndarray, np.ndarray]:
    return gauss_legendre_rule(-(-(2 * M + 2) // 2) + 1 + extra_points)


def basis_integrals(nodes: NodeSet, lower, upper, extra_points: int = 0) -> np.ndarray:
    """int_{lower_i}^{upper_i} phi_r for each interval i (rows) and basis index r."""
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    points, weights = _integration_rule(nodes.M, extra_points)
    width = upper - lower
    t = lower[:, None] + width[:, None] * points[None, :]
    phi = lagrange_matrix(nodes, t.ravel()).reshape(*t.shape, nodes.size)
    return width[:, None] * np.einsum("q,iqr->ir", weights, phi)


@functools.lru_cache(maxsize=None)
def _dec_coefficients(kind: NodeKind, M: int, extra_points: int) -> DeCCoefficients:
    nodes = make_nodes(kind, M)
    t = nodes.nodes
    theta = basis_integrals(nodes, np.zeros_like(t), t, extra_points)
    delta = np.zeros_like(theta)
    delta[1:] = basis_integrals(nodes, t[:-1], t[1:], extra_points)
    gamma = np.concatenate([[0.0], np.diff(t)])
    logger.debug("Build DeC coefficients %s M=%d", kind.value, M)
    return DeCCoefficients(
        nodes=nodes,
        theta=_frozen(theta),
        beta=_frozen(t),
        delta=_frozen(delta),
        gamma=_frozen(gamma),
    )


def dec_coefficients(nodes: NodeSet, extra_points: int = 0) -> DeCCoefficients:
    return _dec_coefficients(nodes.kind, nodes.M, extra_points)


def _ader_quadrature(
    nodes: NodeSet, quadrature: AderQuadrature, extra_points: int
) -> tuple[np.ndarray, np.ndarray]:
    if quadrature is AderQuadrature.EXACT:
        return _integration_rule(nodes.M, extra_points)
    match nodes.kind:
        case NodeKind.GAUSS_LOBATTO:
            return gauss_lobatto_rule(nodes.size)
        case NodeKind.GAUSS_LEGENDRE:
            return gauss_legendre_rule(nodes.size)
        case NodeKind.EQUISPACED:
            # closed Newton-Cotes: interpolatory weights on the basis nodes
            weights = basis_integrals(nodes, [0.0], [1.0], extra_points)[0]
            return nodes.nodes, weights


@functools.lru_cache(maxsize=None)
def _ader_operators(
    kind: NodeKind, M: int, quadrature: AderQuadrature, extra_points: int
) -> ADEROperators:
    nodes = make_nodes(kind, M)
    points, weights = _ader_quadrature(nodes, quadrature, extra_points)
    phi = lagrange_matrix(nodes, points)
    dphi = lagrange_derivative_matrix(nodes, points)
    phi0 = lagrange_matrix(nodes, 0.0)[0]
    phi1 = lagrange_matrix(nodes, 1.0)[0]

    mass = np.outer(phi1, phi1) - dphi.T @ (weights[:, None] * phi)
    R = phi.T @ (weights[:, None] * phi)
    condition_number = float(np.linalg.cond(mass))
    if not np.isfinite(condition_number) or condition_number > MASS_CONDITION_LIMIT:
        raise SingularMassMatrixError(
            f"ADER mass matrix for {kind.value} M={M} with {quadrature.value} quadrature "
            f"is singular (condition number {condition_number:.3e})"
        )
    Q = np.linalg.solve(mass, R)
    b = basis_integrals(nodes, [0.0], [1.0], extra_points)[0]
    logger.debug(
        "Build ADER operators %s M=%d quadrature=%s cond=%.3e",
        kind.value,
        M,
        quadrature.value,
        condition_number,
    )
    return ADEROperators(
        nodes=nodes,
        quadrature=quadrature,
        massM=_frozen(mass),
        R=_frozen(R),
        Q=_frozen(Q),
        P=_frozen(Q.sum(axis=1)),
        b=_frozen(b),
        phi0=_frozen(phi0),
        phi1=_frozen(phi1),
        condition_number=condition_number,
    )


def ader_operators(
    nodes: NodeSet,
    quadrature: str | AderQuadrature | None = None,
    extra_points: int = 0,
) -> ADEROperators:
    """Mass matrix, right-hand-side matrix and the derived Q = massM^-1 R.

    "nodal" integrates on the basis nodes themselves, which for equispaced
    nodes is closed Newton-Cotes; "exact" integrates every product exactly.
    Without a choice, equispaced nodes integrate exactly and Gauss nodes
    use their own rule.
    """
    if quadrature is None:
        quadrature = AderQuadrature.for_nodes(nodes.kind)
    quadrature = AderQuadrature.parse(quadrature)
    return _ader_operators(nodes.kind, nodes.M, quadrature, extra_points)
