from app.schemas.dumps import (
    BorderSummary,
    CoefficientDump,
    ConvergenceMetadata,
    ConvergenceRowDump,
    FailureReport,
    JobMetadata,
    RegionMetadata,
    StencilDump,
    TableauDump,
    TrajectoryMetadata,
    VonNeumannMetadata,
    coefficient_dump,
)
from app.schemas.jobs import (
    ConvergenceParams,
    JobConfig,
    MethodConfig,
    SolveParams,
    StabilityParams,
    VonNeumannParams,
)

__all__ = [
    "BorderSummary",
    "CoefficientDump",
    "ConvergenceMetadata",
    "ConvergenceParams",
    "ConvergenceRowDump",
    "FailureReport",
    "JobConfig",
    "JobMetadata",
    "MethodConfig",
    "RegionMetadata",
    "SolveParams",
    "StabilityParams",
    "StencilDump",
    "TableauDump",
    "TrajectoryMetadata",
    "VonNeumannMetadata",
    "VonNeumannParams",
    "coefficient_dump",
]
