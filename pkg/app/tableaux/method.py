from __future__ import annotations

import enum
from dataclasses import dataclass

from app.core.errors import MethodError
from app.quadrature import AderQuadrature, NodeKind


class Family(str, enum.Enum):
    DEC = "dec"
    SDEC = "sdec"
    ADER = "ader"


class Mode(str, enum.Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"
    IMEX = "imex"


def _parse(enum_type, value, what: str):
    if isinstance(value, enum_type):
        return value
    try:
        return enum_type(str(value).strip().lower())
    except ValueError:
        choices = ", ".join(item.value for item in enum_type)
        raise MethodError(f"unsupported {what} {value!r}, expected one of {choices}") from None


@dataclass(frozen=True)
class MethodSpec:
    """Method selector; the number of subtimesteps M and of iterations K follow from it."""

    family: Family
    kind: NodeKind
    order: int
    mode: Mode
    quadrature: AderQuadrature | None = None
    iterations: int | None = None  # overrides K

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", _parse(Family, self.family, "family"))
        object.__setattr__(self, "kind", NodeKind.parse(self.kind))
        object.__setattr__(self, "mode", _parse(Mode, self.mode, "mode"))
        quadrature = AderQuadrature.for_nodes(self.kind) if self.quadrature is None else self.quadrature
        object.__setattr__(self, "quadrature", AderQuadrature.parse(quadrature))
        if not isinstance(self.order, int) or self.order < 2:
            raise MethodError(f"order must be an integer >= 2, got {self.order!r}")
        if self.iterations is not None and self.iterations < 1:
            raise MethodError(f"iterations must be positive, got {self.iterations}")
        if self.family is not Family.ADER and self.kind is NodeKind.GAUSS_LEGENDRE:
            raise MethodError(
                f"{self.family.value} needs nodes containing both endpoints, "
                "gauss-legendre is only available for ader"
            )

    @property
    def K(self) -> int:
        return self.order if self.iterations is None else self.iterations

    @property
    def M(self) -> int:
        match self.kind:
            case NodeKind.EQUISPACED:
                return self.order - 1
            case NodeKind.GAUSS_LOBATTO:
                return -(-self.order // 2)
            case NodeKind.GAUSS_LEGENDRE:
                return self.order // 2

    @property
    def label(self) -> str:
        label = f"{self.mode.value}-{self.family.value}-{self.kind.short}-{self.order}"
        return label if self.iterations is None else f"{label}-K{self.iterations}"
