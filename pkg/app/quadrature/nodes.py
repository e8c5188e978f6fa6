"""Subtimestep node families on [0, 1].

Gauss nodes come from Newton iteration on the Legendre three-term
recurrence, started from Chebyshev points.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from app.core.config import settings
from app.core.errors import ConfigurationError, NodeConvergenceError
from app.core.logging import get_logger

logger = get_logger(__name__)

NEWTON_TOLERANCE = 1e-15
NEWTON_MAX_ITERATIONS = 100


class NodeKind(str, enum.Enum):
    EQUISPACED = "equispaced"
    GAUSS_LOBATTO = "gauss-lobatto"
    GAUSS_LEGENDRE = "gauss-legendre"

    @property
    def short(self) -> str:
        return _SHORT_NAMES[self]

    @classmethod
    def parse(cls, value: str | NodeKind) -> NodeKind:
        if isinstance(value, NodeKind):
            return value
        try:
            return _ALIASES[value.strip().lower()]
        except KeyError:
            raise ConfigurationError(
                f"unsupported node kind {value!r}, expected one of {sorted(_ALIASES)}"
            ) from None


_SHORT_NAMES = {
    NodeKind.EQUISPACED: "eq",
    NodeKind.GAUSS_LOBATTO: "glb",
    NodeKind.GAUSS_LEGENDRE: "glg",
}

_ALIASES = {
    "eq": NodeKind.EQUISPACED,
    "equispaced": NodeKind.EQUISPACED,
    "glb": NodeKind.GAUSS_LOBATTO,
    "gll": NodeKind.GAUSS_LOBATTO,
    "lobatto": NodeKind.GAUSS_LOBATTO,
    "gauss-lobatto": NodeKind.GAUSS_LOBATTO,
    "glg": NodeKind.GAUSS_LEGENDRE,
    "legendre": NodeKind.GAUSS_LEGENDRE,
    "gauss-legendre": NodeKind.GAUSS_LEGENDRE,
}


@dataclass(frozen=True, eq=False)
class NodeSet:
    """M+1 strictly increasing nodes in [0, 1] of one family."""

    kind: NodeKind
    M: int
    nodes: np.ndarray

    @property
    def size(self) -> int:
        return self.M + 1

    @property
    def contains_endpoints(self) -> bool:
        return self.kind is not NodeKind.GAUSS_LEGENDRE


def legendre(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """P_n(x) and P_{n-1}(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    previous = np.ones_like(x)
    if n == 0:
        return previous, np.zeros_like(x)
    current = x.copy()
    for k in range(1, n):
        previous, current = current, ((2 * k + 1) * x * current - k * previous) / (k + 1)
    return current, previous


def _legendre_derivative(n: int, x: np.ndarray) -> np.ndarray:
    p_n, p_prev = legendre(n, x)
    return n * (x * p_n - p_prev) / (x**2 - 1.0)


def _newton(update, x: np.ndarray, label: str) -> np.ndarray:
    correction = np.inf
    for _ in range(NEWTON_MAX_ITERATIONS):
        dx = update(x)
        x = x - dx
        correction = float(np.max(np.abs(dx), initial=0.0))
        if correction < NEWTON_TOLERANCE:
            break
    # round-off can stall just above the tolerance; a stalled iterate is still a root
    if correction > 1e2 * NEWTON_TOLERANCE:
        raise NodeConvergenceError(f"{label}: Newton correction stalled at {correction:.3e}")
    return x


def _symmetrize(x: np.ndarray) -> np.ndarray:
    x = np.sort(x)
    return 0.5 * (x - x[::-1])


@functools.lru_cache(maxsize=None)
def gauss_legendre_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Legendre nodes and weights on [0, 1], exact up to degree 2n-1."""
    if n < 1:
        raise ConfigurationError(f"Gauss-Legendre rule needs at least one point, got {n}")
    k = np.arange(1, n + 1)
    x0 = np.cos((2 * k - 1) * np.pi / (2 * n))
    x = _symmetrize(
        _newton(lambda x: legendre(n, x)[0] / _legendre_derivative(n, x), x0, f"gauss-legendre({n})")
    )
    weights = 2.0 / ((1.0 - x**2) * _legendre_derivative(n, x) ** 2)
    return _frozen(0.5 * (x + 1.0)), _frozen(0.5 * weights)


@functools.lru_cache(maxsize=None)
def gauss_lobatto_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Lobatto nodes and weights on [0, 1], exact up to degree 2n-3."""
    if n < 2:
        raise ConfigurationError(f"Gauss-Lobatto rule needs at least two points, got {n}")
    N = n - 1
    x0 = -np.cos(np.pi * np.arange(n) / N)

    # (1-x^2) P_N'(x) = N (P_{N-1} - x P_N); Newton on x P_N - P_{N-1} as in lglnodes
    def update(x):
        p_n, p_prev = legendre(N, x)
        return (x * p_n - p_prev) / (n * p_n)

    x = _symmetrize(_newton(update, x0, f"gauss-lobatto({n})"))
    x[0], x[-1] = -1.0, 1.0
    weights = 2.0 / (N * n * legendre(N, x)[0] ** 2)
    return _frozen(0.5 * (x + 1.0)), _frozen(0.5 * weights)


def node_residual(nodes: NodeSet) -> float:
    """Largest Newton correction left at the nodes of their defining polynomial."""
    x = 2.0 * nodes.nodes - 1.0
    match nodes.kind:
        case NodeKind.GAUSS_LEGENDRE:
            n = nodes.size
            return float(np.max(np.abs(legendre(n, x)[0] / _legendre_derivative(n, x))))
        case NodeKind.GAUSS_LOBATTO if nodes.M >= 2:
            N = nodes.M
            inner = x[1:-1]
            p_n, p_prev = legendre(N, inner)
            return float(np.max(np.abs((inner * p_n - p_prev) / ((N + 1) * p_n))))
        case _:
            return 0.0


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@functools.lru_cache(maxsize=None)
def _make_nodes(kind: NodeKind, M: int) -> NodeSet:
    match kind:
        case NodeKind.EQUISPACED:
            values = np.linspace(0.0, 1.0, M + 1)
        case NodeKind.GAUSS_LOBATTO:
            values, _ = gauss_lobatto_rule(M + 1)
        case NodeKind.GAUSS_LEGENDRE:
            values, _ = gauss_legendre_rule(M + 1)
    logger.debug("Build %s nodes M=%d", kind.value, M)
    return NodeSet(kind=kind, M=M, nodes=_frozen(values))


def make_nodes(kind: str | NodeKind, M: int) -> NodeSet:
    kind = NodeKind.parse(kind)
    minimum = 0 if kind is NodeKind.GAUSS_LEGENDRE else 1
    if M < minimum:
        raise ConfigurationError(f"{kind.value} nodes need M >= {minimum}, got {M}")
    if M > settings.max_node_degree:
        raise ConfigurationError(
            f"M={M} exceeds the supported node degree {settings.max_node_degree}"
        )
    return _make_nodes(kind, M)
