"""Picard iteration toward the fixed point, with convergence diagnostics."""

from typing import Optional, Sequence

import numpy as np
from scipy.stats import linregress

from funceq.config.settings import settings_instance as settings
from funceq.core.operator import apply_operator, certify, distance
from funceq.exceptions import BoundaryCheckError, DegenerateFitError, PreconditionError
from funceq.models.equation import EquationSpec
from funceq.models.grid import GridFunction, Metric
from funceq.models.reports import (
    ConvergenceHistory,
    ExpFit,
    IterationRecord,
    StopReason,
)
from funceq.utils.helpers import format_duration
from funceq.utils.logging import logger, timed


def solve(
    spec: EquationSpec,
    f0: GridFunction,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    stop_metric: Optional[Metric] = None,
) -> tuple[GridFunction, ConvergenceHistory]:
    """Iterate f^n = T f^{n-1} until the inter-iterate distance drops below ``tol``.

    Specs without a contraction guarantee still run; the missing guarantee
    is recorded in ``history.warnings``.

    Args:
        spec: Coefficient functions.
        f0: Admissible starting function; fixes the grid.
        tol: Stopping tolerance (defaults to settings.tol).
        max_iter: Iteration cap (defaults to settings.max_iter).
        stop_metric: Metric of the stopping rule (defaults to settings.stop_metric).

    Returns:
        tuple[GridFunction, ConvergenceHistory]: The final iterate and the
        per-iteration record of all three distances.
    """
    tol = settings.tol if tol is None else tol
    max_iter = settings.max_iter if max_iter is None else max_iter
    stop_metric = Metric(stop_metric or settings.stop_metric)
    if tol <= 0:
        raise PreconditionError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise PreconditionError(f"max_iter must be >= 1, got {max_iter}")
    if not f0.admissible:
        raise PreconditionError("initial function must satisfy f(0) = 0 and f(1) = 1")

    warnings: list[str] = []
    report = certify(spec, f0.n_intervals)
    if not report.boundary_checks.all_passed:
        raise BoundaryCheckError(report.boundary_checks.failed())
    if not report.guaranteed:
        message = (
            f"{spec.family_tag}: contraction not guaranteed "
            f"(c = {report.contraction_constant:.6g}); iterating anyway"
        )
        logger.warning(message)
        warnings.append(message)

    records: list[IterationRecord] = []
    current = f0
    stop_reason = StopReason.MAX_ITERATIONS
    for n in range(1, max_iter + 1):
        with timed() as watch:
            nxt = apply_operator(spec, current)
        record = IterationRecord(
            n=n,
            d_sup=distance(nxt, current, Metric.SUP),
            d_l2=distance(nxt, current, Metric.L2),
            d_lip=distance(nxt, current, Metric.LIP),
            seconds=watch.seconds,
        )
        records.append(record)
        current = nxt
        logger.debug(
            f"iteration {n}: sup={record.d_sup:.3e} l2={record.d_l2:.3e} lip={record.d_lip:.3e}"
        )
        if record.distance(stop_metric) < tol:
            stop_reason = StopReason.TOLERANCE
            break

    history = ConvergenceHistory(
        records=records,
        final=current,
        stop_reason=stop_reason,
        stop_metric=stop_metric,
        warnings=warnings,
    )
    if stop_reason is StopReason.TOLERANCE:
        logger.success(
            f"{spec.family_tag}: converged in {history.iterations} iterations "
            f"({format_duration(history.total_seconds)})"
        )
    else:
        logger.info(
            f"{spec.family_tag}: stopped at max_iter = {max_iter}, last "
            f"{stop_metric.value} step {records[-1].distance(stop_metric):.3e}"
        )
    return current, history


def iterate(spec: EquationSpec, f0: GridFunction, iters: int) -> list[GridFunction]:
    """Return [f^0, f^1, ..., f^iters] with no stopping rule."""
    iterates = [f0]
    for _ in range(iters):
        iterates.append(apply_operator(spec, iterates[-1]))
    return iterates


def fit_series(
    values: Sequence[float], skip_first: int = 0, start_index: int = 1
) -> ExpFit:
    """Least-squares line through (n, log value).

    Args:
        values: Positive series, the k-th entry belonging to n = start_index + k.
        skip_first: Leading entries left out of the fit.
        start_index: Iteration index of the first entry.

    Raises:
        DegenerateFitError: With fewer than 3 points or any zero entry.
    """
    y = np.asarray(values, dtype=np.float64)[skip_first:]
    n = np.arange(y.size, dtype=np.float64) + start_index + skip_first
    if y.size < 3:
        raise DegenerateFitError(
            f"need at least 3 points after skipping {skip_first}, have {y.size}"
        )
    if np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise DegenerateFitError(
            "series contains zero or non-finite distances; the iteration has hit "
            "round-off, reduce the number of iterations"
        )
    fit = linregress(n, np.log(y))
    return ExpFit(
        amplitude=float(np.exp(fit.intercept)),
        rate=float(-fit.slope),
        r_squared=float(fit.rvalue**2),
        points=int(y.size),
    )


def fit_exponential(
    history: ConvergenceHistory,
    metric: Metric = Metric.L2,
    skip_first: Optional[int] = None,
) -> ExpFit:
    """Fit distance(n) = A exp(-r n) to one metric column of a history."""
    skip = settings.fit_skip_first if skip_first is None else skip_first
    return fit_series(history.series(Metric(metric)), skip_first=skip, start_index=1)


def residual(spec: EquationSpec, f: GridFunction, metric: Metric = Metric.L2) -> float:
    """A-posteriori defect distance(f, Tf)."""
    return distance(f, apply_operator(spec, f), metric)
