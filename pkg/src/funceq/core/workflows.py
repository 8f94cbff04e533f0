"""Command implementations behind the CLI; each returns the RunReport it prints."""

from typing import Optional, Sequence

import numpy as np

from funceq.config.settings import settings_instance as settings
from funceq.core.approx import optimal_b, residue_l2, suboptimal_b
from funceq.core.bench import run_benchmark
from funceq.core.exact_family import true_error_series
from funceq.core.exprparse import Expression
from funceq.core.mc_oracle import AbsorptionOracle
from funceq.core.operator import certify, distance, evaluate
from funceq.core.solver import fit_exponential, fit_series, iterate, residual, solve
from funceq.exceptions import (
    BoundaryCheckError,
    DegenerateFitError,
    PreconditionError,
    UsageError,
)
from funceq.export.csv_writer import CsvSeriesWriter
from funceq.models.equation import EquationSpec
from funceq.models.grid import GridFunction, Metric
from funceq.models.oracle import ChainConfig
from funceq.models.reports import ConvergenceHistory
from funceq.models.spec_file import RunReport, SolverSummary, SpecFile
from funceq.utils.logging import logger

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNGUARANTEED = 2

REPORT_POINTS = (0.25, 0.5, 0.75, 0.9)


def resolve_spec(
    spec_path: Optional[str],
    family: Optional[str] = None,
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
    m: Optional[float] = None,
) -> SpecFile:
    """Load a spec file or assemble one from --family flags.

    Raises:
        UsageError: If both or neither of a spec path and --family are given.
    """
    if spec_path and family:
        raise UsageError("give either a spec file or --family, not both")
    if spec_path:
        return SpecFile.load(spec_path)
    if not family:
        raise UsageError("a spec file or --family is required")
    if alpha is None or beta is None:
        raise UsageError("--family needs --alpha and --beta")
    fields = {"family": family, "alpha": alpha, "beta": beta}
    if m is not None:
        fields["m"] = m
    try:
        return SpecFile(**fields)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _grid_n(flag: Optional[int], spec_file: Optional[SpecFile] = None) -> int:
    if flag is not None:
        return flag
    if spec_file is not None and spec_file.grid_n is not None:
        return spec_file.grid_n
    return settings.grid_n


def _pick(flag, spec_value, default):
    if flag is not None:
        return flag
    return spec_value if spec_value is not None else default


def initial_function(source: str, grid_n: int) -> GridFunction:
    """Sample an init expression, snapping endpoints within the boundary tolerance.

    Raises:
        PreconditionError: If f(0) or f(1) misses 0 or 1 beyond the tolerance.
    """
    f = GridFunction.from_callable(Expression(source), grid_n)
    values = np.array(f.values)
    tol = settings.boundary_tol
    if abs(values[0]) > tol or abs(values[-1] - 1.0) > tol:
        raise PreconditionError(
            f"init '{source}' gives f(0) = {values[0]!r}, f(1) = {values[-1]!r}; "
            "need f(0) = 0 and f(1) = 1"
        )
    values[0], values[-1] = 0.0, 1.0
    return GridFunction(values=values)


def _summary(spec: EquationSpec, history: ConvergenceHistory) -> SolverSummary:
    final = history.final
    last = history.records[-1]
    return SolverSummary(
        iterations=history.iterations,
        stop_reason=history.stop_reason,
        stop_metric=history.stop_metric,
        final_step=last.distance(history.stop_metric),
        residual_sup=residual(spec, final, Metric.SUP),
        residual_l2=residual(spec, final, Metric.L2),
        residual_lip=residual(spec, final, Metric.LIP),
        seconds=history.total_seconds,
        warnings=history.warnings,
    )


def cmd_check(spec_file: SpecFile, grid_n: Optional[int] = None) -> RunReport:
    """Certificate only; exit 0 if guaranteed, 2 if the hypotheses hold but c >= 1, 1 otherwise."""
    spec = spec_file.to_equation_spec()
    report = certify(spec, _grid_n(grid_n, spec_file))
    if not report.hypotheses_ok:
        exit_code = EXIT_INVALID
        failed = report.boundary_checks.failed()
        if not report.range_ok:
            failed.append("phi1, phi2 map [0, 1] into [0, 1]")
        logger.error(f"{spec.family_tag}: hypotheses fail: {', '.join(failed)}")
        results = {"failed_checks": failed}
    else:
        exit_code = EXIT_OK if report.guaranteed else EXIT_UNGUARANTEED
        results = {}
        logger.info(
            f"{spec.family_tag}: c = {report.contraction_constant:.6g}, "
            f"{'guaranteed' if report.guaranteed else 'not guaranteed'}"
        )
    return RunReport(
        command="check",
        version=settings.app_version,
        input={"spec": spec_file.echo(), "sources": _sources(spec_file)},
        certificate=report,
        results=results,
        exit_code=exit_code,
    )


def _sources(spec_file: SpecFile) -> Optional[dict[str, str]]:
    return spec_file.sources() if spec_file.is_custom else None


def cmd_solve(
    spec_file: SpecFile,
    grid_n: Optional[int] = None,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    init: str = "x",
    metric: Optional[str] = None,
    out: Optional[str] = None,
    history_path: Optional[str] = None,
    snapshots: Sequence[int] = (),
) -> RunReport:
    """Picard-solve a spec, writing the solution and optionally the history."""
    n = _grid_n(grid_n, spec_file)
    tol = _pick(tol, spec_file.tol, settings.tol)
    max_iter = _pick(max_iter, spec_file.max_iter, settings.max_iter)
    stop_metric = Metric(_pick(metric, spec_file.metric, settings.stop_metric))
    if any(k < 0 for k in snapshots):
        raise UsageError("snapshot indices must be non-negative")

    spec = spec_file.to_equation_spec()
    f0 = initial_function(init, n)
    certificate = certify(spec, n)
    final, history = solve(spec, f0, tol=tol, max_iter=max_iter, stop_metric=stop_metric)

    fit = None
    try:
        fit = fit_exponential(history, stop_metric)
    except DegenerateFitError as e:
        logger.info(f"no exponential fit: {e}")

    outputs = {}
    if out:
        taken = {}
        if snapshots:
            iterates = iterate(spec, f0, max(snapshots))
            taken = {k: iterates[k] for k in snapshots}
        outputs["solution"] = str(CsvSeriesWriter(out).write_solution(final, taken))
    if history_path:
        outputs["history"] = str(CsvSeriesWriter(history_path).write_history(history))

    return RunReport(
        command="solve",
        version=settings.app_version,
        input={
            "spec": spec_file.echo(),
            "sources": _sources(spec_file),
            "grid_n": n,
            "tol": tol,
            "max_iter": max_iter,
            "metric": stop_metric.value,
            "init": init,
        },
        certificate=certificate,
        solver=_summary(spec, history),
        fit=fit,
        results={"f_at": {str(x): evaluate(final, x) for x in REPORT_POINTS}},
        outputs=outputs,
    )


def cmd_approx(
    alpha: float,
    beta: float,
    optimal: bool = False,
    proxy_iters: Optional[int] = None,
    out: Optional[str] = None,
    grid_n: Optional[int] = None,
) -> RunReport:
    """Closed-form quadratic, its residues and bounds, optionally against the optimum and f^P."""
    if alpha >= beta:
        raise UsageError(
            f"approx needs alpha < beta, got ({alpha}, {beta}); for alpha == beta "
            "the identity f(x) = x is the exact solution"
        )
    n = _grid_n(grid_n)
    closed = suboptimal_b(alpha, beta)
    residues = residue_l2(alpha, beta, closed.b)
    results = {
        "b": closed.b,
        "admissible": closed.admissible,
        "residues": residues.model_dump(exclude={"alpha", "beta", "b"}),
    }
    x = np.linspace(0.0, 1.0, n + 1)
    header, columns = ["x", "f_tilde"], [x, closed(x)]

    if optimal:
        best = optimal_b(alpha, beta)
        results["optimal"] = {
            "b": best.b,
            "admissible": best.admissible,
            "l2_residue_true": residue_l2(alpha, beta, best.b).l2_residue_true,
        }
        header.append("f_opt")
        columns.append(best(x))

    if proxy_iters is not None:
        if proxy_iters < 1:
            raise UsageError("--proxy-iters must be at least 1")
        spec = EquationSpec.paradise(alpha, beta)
        proxy = iterate(spec, GridFunction.identity(n), proxy_iters)[-1]
        f_tilde = GridFunction(values=closed(x))
        results["proxy"] = {
            "iterations": proxy_iters,
            "sup_error": distance(f_tilde, proxy, Metric.SUP),
            "l2_error": distance(f_tilde, proxy, Metric.L2),
        }
        header.append("f_proxy")
        columns.append(proxy.values)
        logger.info(
            f"closed-form quadratic vs f^{proxy_iters}: l2 {results['proxy']['l2_error']:.3e}, "
            f"sup {results['proxy']['sup_error']:.3e}"
        )

    outputs = {}
    if out:
        outputs["curves"] = str(CsvSeriesWriter(out).write_columns(header, columns))
    return RunReport(
        command="approx",
        version=settings.app_version,
        input={
            "alpha": alpha,
            "beta": beta,
            "optimal": optimal,
            "proxy_iters": proxy_iters,
            "grid_n": n,
        },
        results=results,
        outputs=outputs,
    )


def cmd_oracle(
    spec_file: SpecFile,
    points: Optional[Sequence[float]] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    out: Optional[str] = None,
    grid_n: Optional[int] = None,
) -> RunReport:
    """Monte-Carlo absorption estimates compared with a Picard solve of the same spec."""
    points = list(points) if points else np.linspace(0.1, 0.9, 20).tolist()
    samples = samples or settings.oracle_samples
    cfg = ChainConfig() if seed is None else ChainConfig(base_seed=seed)
    spec = spec_file.to_equation_spec()
    n = _grid_n(grid_n, spec_file)

    certificate = certify(spec, n)
    if not certificate.boundary_checks.all_passed:
        raise BoundaryCheckError(certificate.boundary_checks.failed())
    estimates = AbsorptionOracle(spec, cfg, workers=workers).estimate_many(points, samples)
    final, history = solve(spec, GridFunction.identity(n), tol=spec_file.tol, max_iter=spec_file.max_iter)

    gaps = [abs(e.p_hat - evaluate(final, e.x)) for e in estimates]
    outside = [e.x for e, gap in zip(estimates, gaps) if gap > 3.0 * e.ci_halfwidth]
    if outside:
        logger.warning(f"oracle disagrees with the solver beyond 3 ci at x = {outside}")

    outputs = {}
    if out:
        outputs["estimates"] = str(CsvSeriesWriter(out).write_oracle(estimates))
    return RunReport(
        command="oracle",
        version=settings.app_version,
        input={
            "spec": spec_file.echo(),
            "sources": _sources(spec_file),
            "points": points,
            "samples": samples,
            "chain": cfg.model_dump(),
        },
        certificate=certificate,
        solver=_summary(spec, history),
        results={
            "max_discrepancy": max(gaps),
            "outside_3ci": outside,
            "timeouts": sum(e.timeouts for e in estimates),
        },
        outputs=outputs,
    )


def cmd_bench(
    spec_file: SpecFile,
    max_depth: int,
    min_depth: int = 1,
    init: str = "x",
    out: Optional[str] = None,
    grid_n: Optional[int] = None,
) -> RunReport:
    """Naive-recursion cost per depth against grid-iteration cost."""
    spec = spec_file.to_equation_spec()
    summary = run_benchmark(
        spec,
        Expression(init),
        max_depth=max_depth,
        min_depth=min_depth,
        grid_n=_grid_n(grid_n, spec_file),
    )
    outputs = {}
    if out:
        outputs["bench"] = str(
            CsvSeriesWriter(out).write(
                ["n", "leaf_count", "seconds", "grid_seconds"],
                ((r.n, r.leaf_count, r.seconds, r.grid_seconds) for r in summary.records),
            )
        )
    return RunReport(
        command="bench",
        version=settings.app_version,
        input={
            "spec": spec_file.echo(),
            "sources": _sources(spec_file),
            "min_depth": min_depth,
            "max_depth": max_depth,
            "init": init,
        },
        results={
            "x0": summary.x0,
            "time_base": summary.time_base,
            "grid_exponent": summary.grid_exponent,
            "values": {str(r.n): r.value for r in summary.records},
        },
        outputs=outputs,
    )


def cmd_validate(
    spec_file: SpecFile,
    iters: int = 20,
    init: str = "x",
    metric: Optional[str] = None,
    out: Optional[str] = None,
    grid_n: Optional[int] = None,
) -> RunReport:
    """True-error series of the exact family against x^m, with its exponential fit."""
    if spec_file.family != "exact":
        raise UsageError("validate needs the exact family (family 'exact' with alpha, beta, m)")
    if iters < 1:
        raise UsageError("--iters must be at least 1")
    n = _grid_n(grid_n, spec_file)
    chosen = Metric(_pick(metric, spec_file.metric, Metric.L2))
    spec = spec_file.to_equation_spec()
    params = spec.family

    errors = true_error_series(params, initial_function(init, n), iters, chosen)
    fit = None
    try:
        fit = fit_series(errors, skip_first=settings.fit_skip_first, start_index=0)
    except DegenerateFitError as e:
        logger.info(f"no exponential fit: {e}")

    outputs = {}
    if out:
        outputs["errors"] = str(CsvSeriesWriter(out).write_error_series(errors))
    return RunReport(
        command="validate",
        version=settings.app_version,
        input={
            "spec": spec_file.echo(),
            "iters": iters,
            "init": init,
            "metric": chosen.value,
            "grid_n": n,
        },
        certificate=certify(spec, n),
        fit=fit,
        results={"errors": errors},
        outputs=outputs,
    )

