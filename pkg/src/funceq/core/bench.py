"""Cost of evaluating iterates by naive recursion versus grid iteration.

Unrolling F^n(x) = phi(x) F^{n-1}(phi1(x)) + (1 - phi(x)) F^{n-1}(phi2(x)) down
to F^0 touches 2^n leaves, so the time per point doubles with each depth. The
grid iteration pays a fixed cost per step instead.
"""

from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.stats import linregress

from funceq.config.settings import settings_instance as settings
from funceq.core.solver import iterate
from funceq.exceptions import DegenerateFitError, UsageError
from funceq.models.equation import EquationSpec
from funceq.models.grid import GridFunction
from funceq.utils.logging import logger, timed


class BenchRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    leaf_count: int = Field(ge=1)
    value: float = Field(description="F^n(x0) by naive recursion")
    seconds: float = Field(ge=0)
    grid_seconds: float = Field(ge=0, description="time of n grid iterations")


class BenchSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    x0: float
    records: list[BenchRecord]
    time_base: Optional[float] = Field(
        default=None, description="b in seconds ~ C b^n, from depths >= fit_from"
    )
    grid_exponent: Optional[float] = Field(
        default=None, description="k in grid_seconds ~ C n^k, from depths >= fit_from"
    )


def naive_value(
    spec: EquationSpec, init: Callable[[float], float], x: float, depth: int
) -> tuple[float, int]:
    """F^depth(x) by full recursion; returns the value and the number of leaves."""
    if depth == 0:
        return float(init(x)), 1
    p = float(spec.phi(x))
    up, n_up = naive_value(spec, init, float(spec.phi1(x)), depth - 1)
    down, n_down = naive_value(spec, init, float(spec.phi2(x)), depth - 1)
    return p * up + (1.0 - p) * down, n_up + n_down


def run_benchmark(
    spec: EquationSpec,
    init: Callable,
    max_depth: int,
    min_depth: int = 1,
    x0: Optional[float] = None,
    grid_n: Optional[int] = None,
    fit_from: int = 10,
) -> BenchSummary:
    """Time naive recursion and grid iteration for depths min_depth..max_depth.

    Raises:
        UsageError: If max_depth exceeds the configured guard.
    """
    if max_depth > settings.bench_max_depth:
        raise UsageError(
            f"depth {max_depth} exceeds the guard {settings.bench_max_depth} "
            f"({2**max_depth} leaf evaluations)"
        )
    if not 0 <= min_depth <= max_depth:
        raise UsageError(f"need 0 <= min_depth <= max_depth, got {min_depth}, {max_depth}")
    x0 = settings.bench_x0 if x0 is None else x0
    f0 = GridFunction.from_callable(init, grid_n or settings.grid_n)

    records = []
    for n in range(min_depth, max_depth + 1):
        with timed(f"naive recursion, depth {n}") as naive:
            value, leaves = naive_value(spec, init, x0, n)
        with timed(f"grid iteration, depth {n}") as grid:
            iterate(spec, f0, n)

        records.append(
            BenchRecord(
                n=n, leaf_count=leaves, value=value, seconds=naive.seconds, grid_seconds=grid.seconds
            )
        )
        logger.debug(f"depth {n}: {leaves} leaves in {naive.seconds:.4f}s, grid {grid.seconds:.4f}s")

    time_base, grid_exponent = None, None
    fitted = [r for r in records if r.n >= fit_from and r.seconds > 0]
    if len(fitted) >= 3:
        time_base = float(2.0 ** fit_time_exponent(fitted))
    grid_fitted = [r for r in records if r.n >= fit_from and r.grid_seconds > 0]
    if len(grid_fitted) >= 3:
        fit = linregress(
            np.log([r.n for r in grid_fitted]), np.log([r.grid_seconds for r in grid_fitted])
        )
        grid_exponent = float(fit.slope)
    logger.info(
        f"naive recursion base {time_base}, grid time exponent {grid_exponent}"
    )
    return BenchSummary(x0=x0, records=records, time_base=time_base, grid_exponent=grid_exponent)


def fit_time_exponent(records: list[BenchRecord]) -> float:
    """Slope of log2(seconds) against depth."""
    if len(records) < 3:
        raise DegenerateFitError("need timings at 3 or more depths")
    fit = linregress([r.n for r in records], np.log2([r.seconds for r in records]))
    return float(fit.slope)
