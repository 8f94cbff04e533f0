import argparse

from funceq.exceptions import UsageError
from funceq.models.grid import Metric


class _RaisingParser(argparse.ArgumentParser):
    """Reports bad arguments as UsageError (exit 1) instead of exiting with 2."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _points(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def _indices(text: str) -> list[int]:
    try:
        return sorted({int(p) for p in text.split(",") if p.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


class ArgParser:
    """Encapsulate the CLI argument definition for the funceq entry point."""

    def __init__(self, description="Workbench for f(x) = phi(x) f(phi1(x)) + (1 - phi(x)) f(phi2(x))"):
        """Initialise the parser with the shared description used across tooling.

        Args:
            description: Short text displayed in ``--help`` output.
        """
        self.parser = _RaisingParser(prog="funceq", description=description)
        self.parser.add_argument(
            "--log-level",
            type=str.upper,
            choices=["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"],
            help="Override the configured log level for this run.",
        )
        self.subparsers = self.parser.add_subparsers(dest="command", required=True)
        self._add_commands()

    def _add_spec_source(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("spec", nargs="?", help="Path to a JSON spec file.")
        parser.add_argument(
            "--family", choices=["paradise", "exact"], help="Built-in family instead of a spec file."
        )
        parser.add_argument("--alpha", type=float, help="Family parameter alpha.")
        parser.add_argument("--beta", type=float, help="Family parameter beta.")
        parser.add_argument("--m", type=float, help="Exponent of the exact family.")
        parser.add_argument("--grid", type=int, dest="grid_n", help="Number of grid intervals N.")

    def _add_commands(self):
        """Register the subcommands and their flags."""
        check = self.subparsers.add_parser("check", help="Contraction certificate of a spec.")
        self._add_spec_source(check)

        solve = self.subparsers.add_parser("solve", help="Picard iteration to the fixed point.")
        self._add_spec_source(solve)
        solve.add_argument("--tol", type=float, help="Stopping tolerance.")
        solve.add_argument("--max-iter", type=int, help="Iteration cap.")
        solve.add_argument("--init", default="x", help="Initial function expression.")
        solve.add_argument("--metric", choices=[m.value for m in Metric], help="Stop metric.")
        solve.add_argument("--out", help="Solution CSV (x,f).")
        solve.add_argument("--history", dest="history_path", help="History CSV.")
        solve.add_argument(
            "--snapshots",
            type=_indices,
            default=[],
            help="Comma-separated iterate indices added to the solution CSV.",
        )

        approx = self.subparsers.add_parser("approx", help="Quadratic approximation for paradise(alpha, beta).")
        approx.add_argument("alpha", type=float)
        approx.add_argument("beta", type=float)
        approx.add_argument("--optimal", action="store_true", help="Also minimise the residue numerically.")
        approx.add_argument("--proxy-iters", type=int, help="Compare with the P-th Picard iterate.")
        approx.add_argument("--grid", type=int, dest="grid_n", help="Number of grid intervals N.")
        approx.add_argument("--out", help="Curve CSV (x,f_tilde[,f_opt][,f_proxy]).")

        oracle = self.subparsers.add_parser("oracle", help="Monte-Carlo cross-check of the solver.")
        self._add_spec_source(oracle)
        oracle.add_argument("--points", type=_points, help="Comma-separated points in [0, 1].")
        oracle.add_argument("--samples", type=int, help="Paths per point.")
        oracle.add_argument("--seed", type=int, help="Base seed.")
        oracle.add_argument("--workers", type=int, help="Concurrent chunk workers.")
        oracle.add_argument("--out", help="Estimates CSV (x,p_hat,ci,timeouts).")

        bench = self.subparsers.add_parser("bench", help="Naive recursion cost against grid iteration.")
        self._add_spec_source(bench)
        bench.add_argument("--max-depth", type=int, required=True, help="Deepest recursion level.")
        bench.add_argument("--min-depth", type=int, default=1, help="Shallowest recursion level.")
        bench.add_argument("--init", default="x", help="F^0 expression.")
        bench.add_argument("--out", help="Timing CSV (n,leaf_count,seconds,grid_seconds).")

        validate = self.subparsers.add_parser("validate", help="True error against x^m for the exact family.")
        self._add_spec_source(validate)
        validate.add_argument("--iters", type=int, default=20, help="Picard iterations.")
        validate.add_argument("--init", default="x", help="Initial function expression.")
        validate.add_argument("--metric", choices=[m.value for m in Metric], help="Error metric.")
        validate.add_argument("--out", help="Error CSV (n,error).")

    def parse_args(self, argv=None):
        """Parse arguments and provide an ``argparse.Namespace`` for consumers.

        Returns:
            argparse.Namespace: Parsed CLI arguments.
        """
        return self.parser.parse_args(argv)


# Create a single instance for easy import
arg_parser = ArgParser()
