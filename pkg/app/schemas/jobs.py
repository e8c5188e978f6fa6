"""Job configuration for the command line: flags are merged over an optional JSON file."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.config import settings


class MethodConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: Literal["dec", "sdec", "ader"] = "dec"
    nodes: str = "glb"
    order: int = Field(default=2, ge=2)
    mode: Literal["explicit", "implicit", "imex"] = "imex"
    quadrature: Literal["nodal", "newton-cotes", "exact"] | None = None
    iterations: int | None = Field(default=None, ge=1)
    reduce: bool = False


class StabilityParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["region", "minion", "d0", "d1", "real-axis"] = "region"
    bounds: tuple[float, float, float, float] | None = None
    resolution: int = Field(default_factory=lambda: settings.ode_grid_resolution, ge=2)
    offset: float = Field(default_factory=lambda: settings.ode_grid_offset)
    pgm: bool = False


class VonNeumannParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    plane: Literal["CD", "CE", "CP", "CEP"] = "CE"
    adv: int = Field(default=2, ge=1)
    diff: int | None = None
    disp: int | None = None
    resolution: int = Field(default_factory=lambda: settings.pde_grid_resolution, ge=2)
    n0: int = Field(default_factory=lambda: settings.wavenumber_count, ge=1)
    c_range: tuple[float, float] | None = None
    second_range: tuple[float, float] | None = None
    pgm: bool = False

    @field_validator("plane", mode="before")
    @classmethod
    def upper_plane(cls, value: Any) -> Any:
        return value.upper() if isinstance(value, str) else value


class ConvergenceParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: Literal["dahlquist", "pde"] = "dahlquist"
    strategy: Literal["tableau", "iteration"] = "iteration"
    orders: list[int] = [2, 3, 4, 5]
    steps: list[float] = [0.1, 0.05, 0.025, 0.0125]
    cells: list[int] = [2**n for n in range(5, 12)]
    C: float = Field(default=0.4, gt=0)
    E: float = Field(default=0.5, gt=0)
    t_end: float = Field(default=1.0, gt=0)


class SolveParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: Literal["dahlquist", "stiff-oscillator", "scalar-stiff", "nonlinear-stiff"] = "dahlquist"
    strategy: Literal["tableau", "iteration"] = "iteration"
    h: float = Field(default=0.1, gt=0)
    t_end: float | None = Field(default=None, gt=0)


class JobConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: Literal["tableau", "stability", "vonneumann", "convergence", "solve"]
    out: str = Field(default_factory=lambda: settings.output_dir)
    seed: int = Field(default_factory=lambda: settings.seed)
    threads: int = Field(default_factory=lambda: settings.threads, ge=1)
    method: MethodConfig = MethodConfig()
    stability: StabilityParams | None = None
    vonneumann: VonNeumannParams | None = None
    convergence: ConvergenceParams | None = None
    solve: SolveParams | None = None
