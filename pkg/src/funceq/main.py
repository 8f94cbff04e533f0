"""Main entry point for the funceq workbench."""

import sys
from typing import Optional, Sequence

from funceq.config.settings import settings_instance as settings
from funceq.core import workflows
from funceq.exceptions import FuncEqError
from funceq.models.spec_file import RunReport
from funceq.utils.arg_parser import arg_parser
from funceq.utils.logging import command_context, logger, setup_logging, timed


def dispatch(args) -> RunReport:
    """Run the selected command and return its report."""
    if args.command == "approx":
        return workflows.cmd_approx(
            args.alpha,
            args.beta,
            optimal=args.optimal,
            proxy_iters=args.proxy_iters,
            out=args.out,
            grid_n=args.grid_n,
        )

    spec_file = workflows.resolve_spec(args.spec, args.family, args.alpha, args.beta, args.m)
    if args.command == "check":
        return workflows.cmd_check(spec_file, grid_n=args.grid_n)
    if args.command == "solve":
        return workflows.cmd_solve(
            spec_file,
            grid_n=args.grid_n,
            tol=args.tol,
            max_iter=args.max_iter,
            init=args.init,
            metric=args.metric,
            out=args.out,
            history_path=args.history_path,
            snapshots=args.snapshots,
        )
    if args.command == "oracle":
        return workflows.cmd_oracle(
            spec_file,
            points=args.points,
            samples=args.samples,
            seed=args.seed,
            workers=args.workers,
            out=args.out,
            grid_n=args.grid_n,
        )
    if args.command == "bench":
        return workflows.cmd_bench(
            spec_file,
            max_depth=args.max_depth,
            min_depth=args.min_depth,
            init=args.init,
            out=args.out,
            grid_n=args.grid_n,
        )
    return workflows.cmd_validate(
        spec_file,
        iters=args.iters,
        init=args.init,
        metric=args.metric,
        out=args.out,
        grid_n=args.grid_n,
    )


def _error_report(command: Optional[str], error: Exception, exit_code: int) -> RunReport:
    return RunReport(
        command=command or "",
        version=settings.app_version,
        results={"error": str(error), "error_type": type(error).__name__},
        exit_code=exit_code,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command, print its report to stdout.

    Returns:
        int: Process exit status (0 ok, 1 invalid input, 2 not guaranteed, 3 numerical failure).
    """
    command = None
    with timed() as wall:
        try:
            args = arg_parser.parse_args(argv)
            command = args.command
            setup_logging(log_level=args.log_level)
            with command_context(command):
                logger.info(f"Starting {settings.app_name} v{settings.app_version}")
                report = dispatch(args)
        except FuncEqError as e:
            logger.error(f"{type(e).__name__}: {e}")
            report = _error_report(command, e, e.exit_code)
        except Exception as e:
            logger.exception(f"Unexpected failure: {e}")
            report = _error_report(command, e, 3)

    report = report.model_copy(update={"wall_seconds": wall.seconds})
    print(report.to_json())
    return report.exit_code


def run() -> None:
    """Console-script entry point.

    Exits the process with the code returned by ``main``.
    """
    sys.exit(main())


if __name__ == "__main__":
    run()
