from __future__ import annotations

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict

from app.quadrature import AderQuadrature, NodeSet, ader_operators, dec_coefficients
from app.stencils import Stencil
from app.tableaux import ButcherTableau, IMEXTableau, MethodSpec


def _floats(values) -> list:
    return np.asarray(values, dtype=float).tolist()


class TableauPartDump(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    name: str
    A: list[list[float]]
    b: list[float]
    c: list[float]
    stiffly_accurate: bool


class TableauDump(BaseModel):
    """A tableau with its method selector; for IMEX, A/b hold the implicit part and AHat/bHat the explicit one."""

    model_config = ConfigDict(from_attributes=True)

    label: str
    family: str
    kind: str
    order: int
    mode: str
    Z: int
    c: list[float]
    b: list[float]
    A: list[list[float]]
    bHat: list[float] | None = None
    AHat: list[list[float]] | None = None
    parts: list[TableauPartDump]

    @classmethod
    def from_tableau(cls, tableau: ButcherTableau | IMEXTableau, spec: MethodSpec) -> TableauDump:
        names = ("implicit", "explicit") if isinstance(tableau, IMEXTableau) else ("tableau",)
        parts = [
            TableauPartDump(
                name=name,
                A=_floats(part.A),
                b=_floats(part.b),
                c=_floats(part.c),
                stiffly_accurate=part.is_stiffly_accurate,
            )
            for name, part in zip(names, tableau.parts())
        ]
        first = parts[0]
        explicit = parts[1] if len(parts) > 1 else None
        return cls(
            label=tableau.label,
            family=spec.family.value,
            kind=spec.kind.value,
            order=spec.order,
            mode=spec.mode.value,
            Z=tableau.Z,
            c=first.c,
            b=first.b,
            A=first.A,
            bHat=explicit.b if explicit else None,
            AHat=explicit.A if explicit else None,
            parts=parts,
        )


class AderDump(BaseModel):
    quadrature: str
    massM: list[list[float]]
    R: list[list[float]]
    Q: list[list[float]]
    P: list[float]
    b: list[float]
    condition_number: float


class CoefficientDump(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    kind: str
    M: int
    nodes: list[float]
    theta: list[list[float]] | None = None
    beta: list[float] | None = None
    delta: list[list[float]] | None = None
    ader: AderDump | None = None


def coefficient_dump(nodes: NodeSet, quadrature: AderQuadrature | None = None) -> CoefficientDump:
    """DeC integrals for nodes with both endpoints, ADER operators for every node kind."""
    dump = CoefficientDump(kind=nodes.kind.value, M=nodes.M, nodes=_floats(nodes.nodes))
    if nodes.contains_endpoints:
        coeffs = dec_coefficients(nodes)
        dump.theta = _floats(coeffs.theta)
        dump.beta = _floats(coeffs.beta)
        dump.delta = _floats(coeffs.delta)
    ops = ader_operators(nodes, quadrature)
    dump.ader = AderDump(
        quadrature=ops.quadrature.value,
        massM=_floats(ops.massM),
        R=_floats(ops.R),
        Q=_floats(ops.Q),
        P=_floats(ops.P),
        b=_floats(ops.b),
        condition_number=ops.condition_number,
    )
    return dump


class StencilDump(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    d: int
    q: int
    offsets: list[int]
    coefficients: list[float]
    rationals: list[tuple[int, int]] | None = None

    @classmethod
    def from_stencil(cls, stencil: Stencil) -> StencilDump:
        rationals = None
        if stencil.rationals is not None:
            rationals = [(int(value.p), int(value.q)) for value in stencil.rationals]
        return cls(
            d=stencil.d,
            q=stencil.q,
            offsets=[int(k) for k in stencil.offsets],
            coefficients=_floats(stencil.coefficients),
            rationals=rationals,
        )


class RegionMetadata(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    kind: str
    label: str
    bounds: tuple[float, float, float, float]
    resolution: int
    offset: float
    stable_fraction: float
    extras: dict[str, Any] = {}


class BorderSummary(BaseModel):
    """Stability borders of one von Neumann scan, in the layout of a results table row."""

    method: str
    plane: str
    advection_order: int
    implicit_order: int
    C0: float | None
    C0_valid: bool
    second_axis: str
    second0: float | None
    second0_valid: bool
    valid: bool


class VonNeumannMetadata(BaseModel):
    label: str
    plane: str
    c_range: tuple[float, float]
    second_range: tuple[float, float]
    resolution: int
    wavenumbers: int
    stable_fraction: float
    borders: BorderSummary
    advection: StencilDump
    implicit: StencilDump


class ConvergenceRowDump(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    h: float
    error: float
    order: float | None


class ConvergenceMetadata(BaseModel):
    problem: str
    methods: dict[str, str]
    norm: str
    t_end: float
    rows: dict[str, list[ConvergenceRowDump]]
    unstable: list[tuple[int, int]] = []
    growth: dict[str, float] = {}
    seed: int | None = None


class TrajectoryMetadata(BaseModel):
    problem: str
    method: str
    strategy: str
    h: float
    t_end: float
    steps: int
    final: list[float]
    error: float | None = None


class FailureReport(BaseModel):
    command: str
    error: str
    message: str
    details: dict[str, Any] = {}
    config: dict[str, Any] = {}


class JobMetadata(BaseModel):
    command: str
    version: str
    wall_time_seconds: float
    config: dict[str, Any]
    result: dict[str, Any]
