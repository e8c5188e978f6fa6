"""Exception taxonomy shared by the numerical modules and the CLI.

`ConfigurationError` means the request itself is invalid (exit code 2),
`NumericalFailure` means a valid request broke down numerically (exit code 3).
"""

from typing import Any


class NumericsError(Exception):
    exit_code: int = 1

    def details(self) -> dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self)}


class ConfigurationError(NumericsError, ValueError):
    exit_code = 2


# selector-level problems (family, kind, order, mode) are configuration errors
MethodError = ConfigurationError


class NumericalFailure(NumericsError, ArithmeticError):
    exit_code = 3


class SingularStageError(NumericalFailure):
    def __init__(self, stage: int | str, dt: float, message: str | None = None) -> None:
        self.stage = stage
        self.dt = dt
        super().__init__(message or f"singular stage matrix at stage {stage} with dt={dt!r}")

    def details(self) -> dict[str, Any]:
        return super().details() | {"stage": self.stage, "dt": self.dt}


class SingularMassMatrixError(NumericalFailure):
    pass


class NodeConvergenceError(NumericalFailure):
    pass


class ReductionMismatchError(NumericalFailure):
    def __init__(self, deviation: float) -> None:
        self.deviation = deviation
        super().__init__(f"reduced tableau changes the stability function (deviation {deviation:.3e})")

    def details(self) -> dict[str, Any]:
        return super().details() | {"deviation": self.deviation}


class StepRestrictionWarning(UserWarning):
    """Time step above the bound that guarantees contraction of the correction."""
