"""Stability functions, their rational form and the Pade identities of ADER blocks."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from app.core.logging import get_logger
from app.quadrature import ADEROperators
from app.tableaux import ButcherTableau, IMEXTableau, StageResolvent

logger = get_logger(__name__)

FIT_TOLERANCE = 1e-9
PADE_SAMPLES = 100
PADE_RADIUS = 5.0


def stability_value(tableau: ButcherTableau, z: complex) -> complex:
    """R(z) = 1 + z b^T (I - zA)^-1 1; a pole comes back as inf."""
    return complex(StageResolvent(tableau)(np.asarray([z]))[0])


def imex_stability_value(tableau: IMEXTableau, z_implicit: complex, z_explicit: complex) -> complex:
    return complex(StageResolvent(tableau)(np.asarray([z_implicit]), np.asarray([z_explicit]))[0])


@dataclass(frozen=True, eq=False)
class RationalFit:
    """R(z) = N(z) / Q(z), coefficients in ascending powers with Q(0) = 1."""

    numerator: np.ndarray
    denominator: np.ndarray
    residual: float = 0.0

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.polynomial.polynomial.polyval(z, self.numerator) / np.polynomial.polynomial.polyval(
                z, self.denominator
            )
        return np.where(np.isfinite(values), values, np.inf)

    @property
    def degrees(self) -> tuple[int, int]:
        return self.numerator.size - 1, self.denominator.size - 1

    def series(self, terms: int) -> np.ndarray:
        """First `terms` Taylor coefficients of N/Q at z = 0."""
        numerator = np.zeros(terms)
        denominator = np.zeros(terms)
        numerator[: min(terms, self.numerator.size)] = self.numerator[:terms]
        denominator[: min(terms, self.denominator.size)] = self.denominator[:terms]
        coefficients = np.zeros(terms)
        for k in range(terms):
            coefficients[k] = (numerator[k] - denominator[1 : k + 1] @ coefficients[:k][::-1]) / denominator[0]
        return coefficients


def _trim(coefficients: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(coefficients))
    keep = np.flatnonzero(np.abs(coefficients) > 1e-13 * scale)
    return coefficients[: keep.max() + 1] if keep.size else coefficients[:1]


def rational_fit(tableau: ButcherTableau) -> RationalFit:
    """N and Q from det(I - zA + z 1 b^T) and det(I - zA), interpolated on roots of unity."""
    Z = tableau.Z
    A = np.asarray(tableau.A)
    ones_b = np.outer(np.ones(Z), tableau.b)
    points = np.exp(2j * np.pi * np.arange(Z + 1) / (Z + 1))
    identity = np.eye(Z)
    numerator_values = np.array([np.linalg.det(identity - z * A + z * ones_b) for z in points])
    denominator_values = np.array([np.linalg.det(identity - z * A) for z in points])
    numerator = _trim(np.real(np.fft.fft(numerator_values)) / (Z + 1))
    denominator = _trim(np.real(np.fft.fft(denominator_values)) / (Z + 1))
    numerator, denominator = numerator / denominator[0], denominator / denominator[0]

    samples = 0.5 * np.exp(2j * np.pi * (np.arange(16) + 0.5) / 16)
    fit = RationalFit(numerator=numerator, denominator=denominator)
    direct = StageResolvent(tableau)(samples)
    residual = float(np.max(np.abs(fit(samples) - direct)))
    if residual > FIT_TOLERANCE:
        logger.warning("Rational fit of %s is off by %.3e", tableau.label, residual)
    return RationalFit(numerator=numerator, denominator=denominator, residual=residual)


def pade_coefficients(k: int, j: int) -> RationalFit:
    """Pade(k, j) approximant of exp: numerator degree k, denominator degree j."""
    if k < 0 or j < 0:
        raise ValueError(f"Pade degrees must be nonnegative, got ({k}, {j})")
    total = factorial(k + j)
    numerator = np.array(
        [factorial(k + j - i) * factorial(k) / (total * factorial(i) * factorial(k - i)) for i in range(k + 1)]
    )
    denominator = np.array(
        [
            (-1) ** i * factorial(k + j - i) * factorial(j) / (total * factorial(i) * factorial(j - i))
            for i in range(j + 1)
        ]
    )
    return RationalFit(numerator=numerator, denominator=denominator)


def pade_check(tableau: ButcherTableau, k: int, j: int, seed: int = 0) -> float:
    """Largest relative deviation of R from Pade(k, j) on random points of |z| <= 5."""
    rng = np.random.default_rng(seed)
    radius = PADE_RADIUS * np.sqrt(rng.random(PADE_SAMPLES))
    z = radius * np.exp(2j * np.pi * rng.random(PADE_SAMPLES))
    pade = pade_coefficients(k, j)
    reference = pade(z)
    values = StageResolvent(tableau)(z)
    denominator = np.abs(np.polynomial.polynomial.polyval(z, pade.denominator))
    usable = np.isfinite(reference) & np.isfinite(values) & (denominator > 1e-6)
    return float(np.max(np.abs(values[usable] - reference[usable]) / np.abs(reference[usable])))


def zero_det_check(ops: ADEROperators) -> float:
    """|det(Q - 1 b^T)| divided by the product of its non-negligible singular values."""
    matrix = np.asarray(ops.Q) - np.outer(np.ones(ops.M + 1), ops.b)
    singular_values = np.linalg.svd(matrix, compute_uv=False)
    significant = singular_values[singular_values > 1e-12 * singular_values[0]]
    return float(abs(np.linalg.det(matrix)) / np.prod(significant))


def mass_column_defect(ops: ADEROperators) -> float:
    """Largest entry of the sum of the rows of R - massM 1 b^T."""
    matrix = np.asarray(ops.R) - np.outer(ops.massM @ np.ones(ops.M + 1), ops.b)
    return float(np.max(np.abs(matrix.sum(axis=0))))
