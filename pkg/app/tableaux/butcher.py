from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from app.core.errors import ConfigurationError

ROW_SUM_TOLERANCE = 1e-13


class Structure(str, enum.Enum):
    EXPLICIT = "explicit"
    DIAGONALLY_IMPLICIT = "diagonally-implicit"
    BLOCK_IMPLICIT = "block-implicit"


def classify(A: np.ndarray) -> Structure:
    if not np.any(np.triu(A)):
        return Structure.EXPLICIT
    if not np.any(np.triu(A, k=1)):
        return Structure.DIAGONALLY_IMPLICIT
    return Structure.BLOCK_IMPLICIT


def stage_blocks(*matrices: np.ndarray) -> list[tuple[int, int]]:
    """Smallest contiguous stage groups [start, stop) that must be solved together.

    Entries above the block diagonal never occur, so every group only
    depends on itself and on earlier groups.
    """
    pattern = np.zeros(matrices[0].shape, dtype=bool)
    for matrix in matrices:
        pattern |= matrix != 0
    Z = pattern.shape[0]
    last = np.array([np.flatnonzero(row).max() if row.any() else -1 for row in pattern])
    blocks = []
    start = 0
    while start < Z:
        stop = start + 1
        reach = last[start]
        while stop <= reach:
            reach = max(reach, last[stop])
            stop += 1
        blocks.append((start, stop))
        start = stop
    return blocks


def _frozen(values) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class ButcherTableau:
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray = field(default=None)  # type: ignore[assignment]
    label: str = ""

    def __post_init__(self) -> None:
        A = _frozen(self.A)
        b = _frozen(self.b)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or b.shape != (A.shape[0],):
            raise ConfigurationError(f"inconsistent tableau shapes A{A.shape} b{b.shape}")
        row_sums = A.sum(axis=1)
        c = row_sums if self.c is None else _frozen(self.c)
        if np.max(np.abs(c - row_sums), initial=0.0) > ROW_SUM_TOLERANCE:
            raise ConfigurationError("tableau abscissae differ from the row sums of A")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", _frozen(c))

    @property
    def Z(self) -> int:
        return self.A.shape[0]

    @property
    def structure(self) -> Structure:
        return classify(self.A)

    @property
    def is_stiffly_accurate(self) -> bool:
        return bool(np.array_equal(self.A[-1], self.b))

    def parts(self) -> tuple[ButcherTableau, ...]:
        return (self,)


@dataclass(frozen=True, eq=False)
class IMEXTableau:
    """Implicit part for the stiff term S, explicit part for the non-stiff term G."""

    implicit: ButcherTableau
    explicit: ButcherTableau
    label: str = ""

    def __post_init__(self) -> None:
        if self.implicit.Z != self.explicit.Z:
            raise ConfigurationError(
                f"IMEX parts disagree on stage count: {self.implicit.Z} vs {self.explicit.Z}"
            )
        if self.explicit.structure is not Structure.EXPLICIT:
            raise ConfigurationError("explicit part of an IMEX tableau must be strictly lower triangular")
        if np.max(np.abs(self.implicit.c - self.explicit.c), initial=0.0) > ROW_SUM_TOLERANCE:
            raise ConfigurationError("IMEX parts disagree on the abscissae c")

    @property
    def Z(self) -> int:
        return self.implicit.Z

    @property
    def c(self) -> np.ndarray:
        return self.implicit.c

    def parts(self) -> tuple[ButcherTableau, ...]:
        return (self.implicit, self.explicit)


Tableau = ButcherTableau | IMEXTableau


def explicit_euler() -> ButcherTableau:
    return ButcherTableau(A=np.zeros((1, 1)), b=np.ones(1), label="explicit-euler")


def implicit_euler() -> ButcherTableau:
    return ButcherTableau(A=np.ones((1, 1)), b=np.ones(1), label="implicit-euler")
