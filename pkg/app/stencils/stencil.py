"""Finite-difference stencils on a uniform periodic grid.

Coefficients satisfy the moment conditions

    sum_k alpha_k k^m / m! = 1 if m == d else 0,    m = 0 .. n-1,

on the n integer offsets. They are computed exactly as sympy rationals
(Fornberg weights), so the float coefficients are correctly rounded.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import factorial

import numpy as np
import sympy
from sympy.calculus.finite_diff import finite_diff_weights

from app.core.errors import ConfigurationError, NumericalFailure
from app.core.logging import get_logger

logger = get_logger(__name__)

MOMENT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class Stencil:
    """alpha_k approximating dx^d times the d-th derivative from offsets k."""

    d: int
    q: int
    offsets: np.ndarray
    coefficients: np.ndarray
    rationals: tuple[sympy.Rational, ...] | None = None

    @property
    def r(self) -> int:
        return int(-self.offsets[0])

    @property
    def s(self) -> int:
        return int(self.offsets[-1])

    @property
    def width(self) -> int:
        return self.offsets.size

    def symbol(self, theta) -> np.ndarray:
        """sigma(theta) = sum_k alpha_k exp(i k theta)."""
        theta = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(theta, self.offsets)) @ self.coefficients

    def moment_residual(self, moments: int | None = None) -> float:
        moments = self.q + self.d if moments is None else moments
        k = self.offsets.astype(float)
        residual = 0.0
        for m in range(moments):
            target = 1.0 if m == self.d else 0.0
            value = float(self.coefficients @ (k**m)) / factorial(m)
            residual = max(residual, abs(value - target))
        return residual


def symbol_eval(stencil: Stencil, theta: float) -> complex:
    return complex(stencil.symbol(theta))


@functools.lru_cache(maxsize=None)
def _moment_solve(left: int, right: int, d: int) -> tuple[sympy.Rational, ...]:
    offsets = [sympy.Integer(k) for k in range(-left, right + 1)]
    weights = finite_diff_weights(d, offsets, 0)[d][-1]
    return tuple(sympy.Rational(weight) for weight in weights)


def moment_stencil(left: int, right: int, d: int) -> Stencil:
    """Maximal-order stencil for the d-th derivative on offsets -left..right."""
    n = left + right + 1
    if left < 0 or right < 0 or n <= d:
        raise ConfigurationError(f"offsets -{left}..{right} cannot approximate a derivative of order {d}")
    rationals = _moment_solve(left, right, d)
    q = n - d
    # symmetric central stencils of even derivatives gain one order
    if left == right and d % 2 == 0:
        q += 1 if (n - d) % 2 else 0
    stencil = Stencil(
        d=d,
        q=q,
        offsets=np.arange(-left, right + 1),
        coefficients=np.array([float(value) for value in rationals]),
        rationals=rationals,
    )
    residual = stencil.moment_residual()
    if residual > MOMENT_TOLERANCE:
        raise NumericalFailure(f"moment conditions violated by {residual:.3e}")
    return stencil


def advection_stencil(r: int, s: int) -> Stencil:
    """Order r+s first-derivative stencil on offsets -r..s."""
    if r < 0 or s < 0 or r + s < 1:
        raise ConfigurationError(f"advection stencil needs r, s >= 0 and r + s >= 1, got ({r}, {s})")
    return moment_stencil(r, s, 1)


def advection_closed_form(r: int, s: int) -> np.ndarray:
    """Closed-form coefficients of the [r, s] first-derivative stencil."""
    coefficients = []
    for k in range(-r, s + 1):
        if k == 0:
            if s >= r + 1:
                value = -sum(sympy.Rational(1, j) for j in range(r + 1, s + 1))
            else:
                value = sum(sympy.Rational(1, j) for j in range(s + 1, r + 1))
        else:
            sign = 1 if (k + 1) % 2 == 0 else -1
            value = sympy.Rational(sign, k) * sympy.Rational(
                factorial(r) * factorial(s), factorial(r + k) * factorial(s - k)
            )
        coefficients.append(float(value))
    return np.array(coefficients)


def advection_stencil_for_order(q: int) -> Stencil:
    """Upwind-biased stencil of order q for a > 0: one (odd q) or two (even q) extra points on the left."""
    if q < 1:
        raise ConfigurationError(f"advection order must be positive, got {q}")
    s = (q - 1) // 2 if q % 2 else (q - 2) // 2
    r = q - s
    return advection_stencil(r, s)


def diffusion_stencil(q: int) -> Stencil:
    """Central second-derivative stencil of order q on 2*(q/2)+1 points."""
    if q not in (2, 4, 6, 8):
        raise ConfigurationError(f"diffusion order must be one of 2, 4, 6, 8, got {q}")
    half = q // 2
    stencil = moment_stencil(half, half, 2)
    return Stencil(
        d=2, q=q, offsets=stencil.offsets, coefficients=stencil.coefficients, rationals=stencil.rationals
    )


def dispersion_stencil(q: int) -> Stencil:
    """Third-derivative stencil of order q on offsets -(q+1)/2 .. (q+3)/2."""
    if q not in (3, 5, 7):
        raise ConfigurationError(f"dispersion order must be one of 3, 5, 7, got {q}")
    r = (q + 1) // 2
    return moment_stencil(r, r + 1, 3)
