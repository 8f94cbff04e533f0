"""The exactly solvable family whose fixed point is f(x) = x^m.

With phi1(x) = alpha x + 1 - alpha, phi2(x) = beta x and

    phi_m(x) = (1 - beta^m) x^m / ((alpha x + 1 - alpha)^m - beta^m x^m),

x^m solves f = phi_m f(phi1) + (1 - phi_m) f(phi2) for every 0 < alpha <= beta < 1,
which makes it the ground truth for true-error measurements.
"""

from typing import Optional

import numpy as np

from funceq.config.settings import settings_instance as settings
from funceq.core.operator import apply_operator, distance
from funceq.exceptions import ConstructionError, PreconditionError
from funceq.models.equation import EquationSpec, ExactFamily
from funceq.models.grid import GridFunction, Metric, grid_nodes
from funceq.utils.logging import logger

# ExactFamily doubles as the parameter record
ExactFamilyParams = ExactFamily


def _denominator(p: ExactFamilyParams, x: np.ndarray) -> np.ndarray:
    return np.power(p.alpha * x + (1.0 - p.alpha), p.m) - np.power(p.beta * x, p.m)


def build_spec(p: ExactFamilyParams, check_nodes: Optional[int] = None) -> EquationSpec:
    """Coefficients of the exact family, with phi_m(0) = 0 and phi_m(1) = 1.

    Raises:
        ConstructionError: If the denominator is not positive at a sample node.
    """
    x = grid_nodes(check_nodes or settings.grid_n)
    den = _denominator(p, x)
    if np.any(den <= 0):
        i = int(np.argmax(den <= 0))
        raise ConstructionError(
            f"phi_m denominator {den[i]!r} <= 0 at x = {x[i]!r} for {p!r}"
        )

    alpha, beta, m = p.alpha, p.beta, p.m
    scale = 1.0 - beta**m

    def phi(x):
        x = np.asarray(x, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            value = scale * np.power(x, m) / _denominator(p, x)
        return np.where(x == 0.0, 0.0, np.where(x == 1.0, 1.0, value))

    def phi1(x):
        return alpha * np.asarray(x, dtype=np.float64) + (1.0 - alpha)

    def phi2(x):
        return beta * np.asarray(x, dtype=np.float64)

    logger.debug(f"built exact family spec {p!r}")
    return EquationSpec(phi=phi, phi1=phi1, phi2=phi2, family=p)


def exact_solution(m: float, grid_n: Optional[int] = None) -> GridFunction:
    """Grid sampling of x^m."""
    if not m > 0:
        raise PreconditionError(f"m must be positive, got {m}")
    x = grid_nodes(grid_n or settings.grid_n)
    values = np.power(x, m)
    values[0], values[-1] = 0.0, 1.0
    return GridFunction(values=values)


def true_error_series(
    p: ExactFamilyParams,
    f0: GridFunction,
    iters: int,
    metric: Metric = Metric.L2,
) -> list[float]:
    """distance(x^m, f^n) for n = 0..iters along the Picard iteration from f0."""
    if not f0.admissible:
        raise PreconditionError("initial function must satisfy f(0) = 0 and f(1) = 1")
    spec = build_spec(p, check_nodes=f0.n_intervals)
    exact = exact_solution(p.m, f0.n_intervals)
    current = f0
    errors = [distance(exact, current, metric)]
    for _ in range(iters):
        current = apply_operator(spec, current)
        errors.append(distance(exact, current, metric))
    logger.debug(f"true error after {iters} iterations: {errors[-1]:.3e}")
    return errors
