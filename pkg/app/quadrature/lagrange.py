from __future__ import annotations

import numpy as np

from app.quadrature.nodes import NodeSet


def _points(nodes: NodeSet | np.ndarray) -> np.ndarray:
    return nodes.nodes if isinstance(nodes, NodeSet) else np.asarray(nodes, dtype=float)


def lagrange_matrix(nodes: NodeSet | np.ndarray, t) -> np.ndarray:
    """phi_r(t_i) for every evaluation point t_i (rows) and basis index r (columns)."""
    x = _points(nodes)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    diff = t[:, None] - x[None, :]
    values = np.empty((t.size, x.size))
    for r in range(x.size):
        others = np.delete(np.arange(x.size), r)
        values[:, r] = np.prod(diff[:, others], axis=1) / np.prod(x[r] - x[others])
    return values


def lagrange_derivative_matrix(nodes: NodeSet | np.ndarray, t) -> np.ndarray:
    """phi_r'(t_i), same layout as `lagrange_matrix`."""
    x = _points(nodes)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    diff = t[:, None] - x[None, :]
    values = np.zeros((t.size, x.size))
    for r in range(x.size):
        others = np.delete(np.arange(x.size), r)
        denominator = np.prod(x[r] - x[others])
        for j in others:
            rest = others[others != j]
            values[:, r] += np.prod(diff[:, rest], axis=1)
        values[:, r] /= denominator
    return values


def lagrange_eval(nodes: NodeSet | np.ndarray, r: int, t: float) -> float:
    x = _points(nodes)
    if not 0 <= r < x.size:
        raise IndexError(f"basis index {r} outside 0..{x.size - 1}")
    return float(lagrange_matrix(x, t)[0, r])
