import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from app import __version__
from app.core.config import settings
from app.core.errors import ConfigurationError, NumericalFailure
from app.core.logging import get_logger, setup_logging
from app.schemas import FailureReport, JobConfig
from app.services.commands import run_job
from app.services.io import write_json

logger = get_logger(__name__)

GLOBAL_FLAGS = ("out", "seed", "threads")
METHOD_FLAGS = ("family", "nodes", "order", "mode", "quadrature", "iterations", "reduce")


def _method_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    group = parser.add_argument_group("method")
    group.add_argument("--family", choices=["dec", "sdec", "ader"])
    group.add_argument("--nodes", help="eq, glb (gauss-lobatto) or glg (gauss-legendre)")
    group.add_argument("--order", type=int)
    group.add_argument("--mode", choices=["explicit", "implicit", "imex"])
    group.add_argument("--quadrature", choices=["nodal", "newton-cotes", "exact"])
    group.add_argument("--iterations", type=int, help="number of corrections, defaults to the order")
    group.add_argument("--reduce", action="store_true", help="merge duplicate and unused stages")

    common = parser.add_argument_group("job")
    common.add_argument("--out", help=f"output directory (default {settings.output_dir})")
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)
    common.add_argument("--config", help="JSON job file; flags override its values")
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imex-dec-ader",
        description="DeC, sDeC and ADER methods as Butcher tableaux with stability analysis.",
        argument_default=argparse.SUPPRESS,
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--log-level", dest="log_level", type=str.upper, choices=["DEBUG", "INFO", "WARNING", "ERROR"]
    )
    method = _method_parser()
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        return commands.add_parser(
            name, parents=[method], argument_default=argparse.SUPPRESS, help=help
        )

    command("tableau", help="dump the Butcher tableau and coefficients")

    stability = command("stability", help="ODE stability regions")
    stability.add_argument("--kind", choices=["region", "minion", "d0", "d1", "real-axis"])
    stability.add_argument("--bounds", type=float, nargs=4, metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    stability.add_argument("--resolution", type=int)
    stability.add_argument("--offset", type=float)
    stability.add_argument("--pgm", action="store_true", help="also write the stable mask as PGM")

    vonneumann = command("vonneumann", help="von Neumann parameter scans")
    vonneumann.add_argument("--plane", type=str.upper, choices=["CD", "CE", "CP", "CEP"])
    vonneumann.add_argument("--adv", type=int, help="advection stencil order")
    vonneumann.add_argument("--diff", type=int, help="diffusion stencil order")
    vonneumann.add_argument("--disp", type=int, help="dispersion stencil order")
    vonneumann.add_argument("--resolution", type=int)
    vonneumann.add_argument("--n0", type=int, help="number of interior wavenumbers")
    vonneumann.add_argument("--c-range", dest="c_range", type=float, nargs=2)
    vonneumann.add_argument("--second-range", dest="second_range", type=float, nargs=2)
    vonneumann.add_argument("--pgm", action="store_true")

    convergence = command("convergence", help="error tables")
    convergence.add_argument("--problem", choices=["dahlquist", "pde"])
    convergence.add_argument("--strategy", choices=["tableau", "iteration"])
    convergence.add_argument("--orders", type=int, nargs="+")
    convergence.add_argument("--steps", type=float, nargs="+", help="time steps for dahlquist")
    convergence.add_argument("--cells", type=int, nargs="+", help="grid sizes J for pde")
    convergence.add_argument("--C", type=float)
    convergence.add_argument("--E", type=float)
    convergence.add_argument("--t-end", dest="t_end", type=float)

    solve = command("solve", help="integrate a reference problem")
    solve.add_argument(
        "--problem", choices=["dahlquist", "stiff-oscillator", "scalar-stiff", "nonlinear-stiff"]
    )
    solve.add_argument("--strategy", choices=["tableau", "iteration"])
    solve.add_argument("--h", type=float)
    solve.add_argument("--t-end", dest="t_end", type=float)
    return parser


def load_config(arguments: dict) -> JobConfig:
    arguments = dict(arguments)
    command = arguments.pop("command")
    data: dict = {}
    if config_path := arguments.pop("config", None):
        try:
            data = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exception:
            raise ConfigurationError(f"cannot read config file {config_path}: {exception}") from exception
        if not isinstance(data, dict):
            raise ConfigurationError(f"config file {config_path} must hold a JSON object")
    data["command"] = command
    for key in GLOBAL_FLAGS:
        if key in arguments:
            data[key] = arguments.pop(key)
    method = dict(data.get("method") or {})
    for key in METHOD_FLAGS:
        if key in arguments:
            method[key] = arguments.pop(key)
    data["method"] = method
    if command != "tableau":
        params = dict(data.get(command) or {})
        params.update(arguments)
        data[command] = params
    return JobConfig.model_validate(data)


def main(argv: Sequence[str] | None = None) -> int:
    arguments = vars(build_parser().parse_args(argv))
    setup_logging(settings.service_name, arguments.pop("log_level", None))
    command = arguments.get("command", "")
    try:
        config = load_config(arguments)
    except (ValidationError, ConfigurationError) as exception:
        logger.error("Invalid %s job: %s", command, exception)
        print(f"error: {exception}", file=sys.stderr)
        return ConfigurationError.exit_code

    settings.seed = config.seed
    settings.threads = config.threads
    try:
        files = run_job(config)
    except ConfigurationError as exception:
        logger.error("Invalid %s job: %s", command, exception, exc_info=True)
        print(f"error: {exception}", file=sys.stderr)
        return exception.exit_code
    except NumericalFailure as exception:
        logger.error("Numerical failure in %s: %s", command, exception, exc_info=True)
        report = FailureReport(
            command=command,
            error=type(exception).__name__,
            message=str(exception),
            details=exception.details(),
            config=config.model_dump(mode="json"),
        )
        path = write_json(Path(config.out) / f"failure-{command}.json", report)
        print(f"numerical failure: {exception} (see {path})", file=sys.stderr)
        return exception.exit_code

    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
