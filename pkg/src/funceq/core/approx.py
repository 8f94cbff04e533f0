"""Quadratic approximations x(x+b)/(1+b) of the paradise-fish solution.

For f~(x) = x(x+b)/(1+b) the defect against phi = x, phi1 = alpha*x + 1 - alpha,
phi2 = beta*x factors exactly as

    f~(x) - T f~(x) = x(1-x) Q(x) / (-1-b),
    Q(x) = (beta^2 - alpha^2) x + (1-alpha)^2 + b (beta-alpha),

so the L2 residue is sqrt(P(b)) / |1+b| with P(b) = int_0^1 x^2 (1-x)^2 Q^2 dx,
a quadratic in b minimised at the closed-form b_c.
"""

import math
from typing import Callable

import numpy as np
from scipy.integrate import trapezoid

from funceq.config.settings import settings_instance as settings
from funceq.exceptions import (
    DomainError,
    NumericalCheckError,
    OptimizationError,
    SingularFormulaError,
)
from funceq.models.approx import ApproxKind, QuadraticApprox, ResidueReport
from funceq.models.grid import grid_nodes
from funceq.utils.logging import logger

SQRT_840 = math.sqrt(840.0)
GLOBAL_RESIDUE_BOUND = (2.0 - math.sqrt(2.0)) ** 2 / (2.0 * math.sqrt(210.0))
REGION_TOL = 1e-12

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def _check_parameters(alpha: float, beta: float) -> None:
    if not (0.0 < alpha < 1.0 and 0.0 < beta < 1.0):
        raise DomainError(f"need 0 < alpha, beta < 1, got ({alpha}, {beta})")
    if alpha == beta:
        raise SingularFormulaError(
            "alpha == beta makes the closed form singular; the exact solution is "
            "then the identity f(x) = x"
        )
    if alpha > beta:
        raise DomainError(f"need alpha < beta, got ({alpha}, {beta})")


def in_admissible_region(alpha: float, beta: float) -> bool:
    """alpha^2 + (beta - 2)^2 >= 2, equivalently b_c <= -2."""
    return alpha**2 + (beta - 2.0) ** 2 >= 2.0 - REGION_TOL


def region_boundary_beta(alpha: float) -> float:
    """Largest admissible beta for a given alpha: 2 - sqrt(2 - alpha^2)."""
    return 2.0 - math.sqrt(2.0 - alpha**2)


def suboptimal_b(alpha: float, beta: float) -> QuadraticApprox:
    """Closed-form parameter b_c = -((2-alpha)^2 + beta^2 - 2) / (2(beta-alpha)).

    Raises:
        SingularFormulaError: If alpha == beta.
        DomainError: Outside 0 < alpha < beta < 1.
    """
    _check_parameters(alpha, beta)
    b = -((2.0 - alpha) ** 2 + beta**2 - 2.0) / (2.0 * (beta - alpha))
    admissible = in_admissible_region(alpha, beta)
    if not admissible:
        logger.warning(
            f"(alpha, beta) = ({alpha}, {beta}) is outside the admissible region: "
            f"b_c = {b:.6g} > -2, the quadratic is not increasing and concave"
        )
    return QuadraticApprox(
        b=b,
        alpha=alpha,
        beta=beta,
        kind=ApproxKind.SUBOPTIMAL_CLOSED_FORM,
        admissible=admissible,
    )


def closed_form_approximation(alpha: float, beta: float) -> QuadraticApprox:
    """The closed-form quadratic, or the identity (an exact solution) when alpha == beta."""
    if alpha == beta and 0.0 < alpha < 1.0:
        return QuadraticApprox(
            b=float("-inf"),
            alpha=alpha,
            beta=beta,
            kind=ApproxKind.IDENTITY,
            admissible=True,
        )
    return suboptimal_b(alpha, beta)


def quadratic_eval(q: QuadraticApprox, x):
    """Evaluate x(x+b)/(1+b) at a point or array of points in [0, 1]."""
    xs = np.asarray(x, dtype=np.float64)
    if np.any((xs < 0.0) | (xs > 1.0)):
        raise DomainError("quadratic is evaluated on [0, 1] only")
    out = q(xs)
    return float(out) if np.ndim(out) == 0 else out


def _quadratic(b: float, x):
    return x * (x + b) / (1.0 + b)


def _check_b(b: float) -> None:
    if not b < -1.0:
        raise DomainError(f"residue formulas need b < -1, got {b}")


def residue_pointwise(alpha: float, beta: float, b: float, x):
    """Signed defect f~(x) - [x f~(alpha x + 1 - alpha) + (1-x) f~(beta x)], closed form."""
    _check_b(b)
    x = np.asarray(x, dtype=np.float64)
    if np.any((x < 0.0) | (x > 1.0)):
        raise DomainError("residue is defined on [0, 1] only")
    q = (beta**2 - alpha**2) * x + (1.0 - alpha) ** 2 + b * (beta - alpha)
    out = x * (1.0 - x) * q / (-1.0 - b)
    return float(out) if out.ndim == 0 else out


def residue_direct(alpha: float, beta: float, b: float, x):
    """The same defect evaluated from both sides of the equation."""
    x = np.asarray(x, dtype=np.float64)
    rhs = x * _quadratic(b, alpha * x + 1.0 - alpha) + (1.0 - x) * _quadratic(b, beta * x)
    out = _quadratic(b, x) - rhs
    return float(out) if out.ndim == 0 else out


def residue_estimate_squared(alpha: float, beta: float, b: float) -> float:
    """P(b) = int_0^1 x^2 (1-x)^2 Q(x)^2 dx in closed form."""
    s = beta**2 - alpha**2
    k = (1.0 - alpha) ** 2 + b * (beta - alpha)
    return s * s / 105.0 + s * k / 30.0 + k * k / 30.0


def residue_estimate_derivative(alpha: float, beta: float, b: float) -> float:
    """dP/db; vanishes exactly at the closed-form b_c."""
    s = beta**2 - alpha**2
    k = (1.0 - alpha) ** 2 + b * (beta - alpha)
    return (beta - alpha) * (s + 2.0 * k) / 30.0


def _true_residue(alpha: float, beta: float, b: float, x: np.ndarray) -> float:
    d = x * (1.0 - x) * (
        (beta**2 - alpha**2) * x + (1.0 - alpha) ** 2 + b * (beta - alpha)
    ) / (-1.0 - b)
    return float(np.sqrt(trapezoid(d * d, x)))


def residue_l2(
    alpha: float, beta: float, b: float, quad_points: int | None = None
) -> ResidueReport:
    """True L2 residue by trapezoid quadrature and the closed-form estimate sqrt(P(b)).

    Raises:
        DomainError: If b >= -1.
        NumericalCheckError: If the closed-form defect disagrees with direct evaluation.
    """
    _check_b(b)
    x = grid_nodes(quad_points or settings.quad_points)
    closed = residue_pointwise(alpha, beta, b, x)
    direct = residue_direct(alpha, beta, b, x)
    mismatch = float(np.max(np.abs(closed - direct)))
    if mismatch > 1e-10 * (1.0 + float(np.max(np.abs(direct)))):
        raise NumericalCheckError(
            f"closed-form defect differs from direct evaluation by {mismatch:.3e}"
        )
    s = beta**2 - alpha**2
    return ResidueReport(
        alpha=alpha,
        beta=beta,
        b=b,
        l2_residue_true=float(np.sqrt(trapezoid(closed * closed, x))),
        l2_residue_estimate=math.sqrt(max(residue_estimate_squared(alpha, beta, b), 0.0)),
        analytic_at_bc=s / SQRT_840,
        alpha_worst_case_bound=((2.0 - math.sqrt(2.0 - alpha**2)) ** 2 - alpha**2)
        / SQRT_840,
        global_bound=GLOBAL_RESIDUE_BOUND,
    )


def golden_section(
    f: Callable[[float], float], a: float, b: float, tol: float
) -> tuple[float, float]:
    """Shrink a bracket around the minimum of a unimodal function.

    Args:
        f: Function with a single local minimum on [a, b].
        a: One end of the bracket.
        b: The other end; the ends may come in either order.
        tol: Largest acceptable width of the result.

    Returns:
        A subinterval (c, d) containing the minimum with d - c <= tol.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, b

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    if yc < yd:
        return a, d
    return c, b


def optimal_b(
    alpha: float, beta: float, spec_grid: int | None = None
) -> QuadraticApprox:
    """Minimise the true L2 residue over b < -1 by golden-section search.

    The bracket [b_lo, -1 - 1e-6] starts at settings.bracket_start and its left
    end doubles until the minimiser is interior.

    Raises:
        OptimizationError: If no interior minimum is found or the three-point
            unimodality test fails.
    """
    _check_parameters(alpha, beta)
    x = grid_nodes(spec_grid or settings.quad_points)

    def objective(b: float) -> float:
        return _true_residue(alpha, beta, b, x)

    tol = settings.golden_tol
    hi = -1.0 - 1e-6
    lo = settings.bracket_start
    for _ in range(settings.bracket_max_doublings):
        left, right = golden_section(objective, lo, hi, tol)
        b_star = 0.5 * (left + right)
        if b_star - lo <= 10 * tol:
            logger.debug(f"minimum at the bracket edge {lo}, expanding")
            lo *= 2.0
            continue
        if hi - b_star <= 10 * tol:
            raise OptimizationError(
                "minimum sits at the singular end b -> -1",
                {"alpha": alpha, "beta": beta, "b": b_star},
            )
        break
    else:
        raise OptimizationError(
            "bracket expansion did not isolate an interior minimum",
            {"alpha": alpha, "beta": beta, "lo": lo},
        )

    step = max(1e-4 * abs(b_star), 1e-6)
    f_star = objective(b_star)
    neighbours = {
        "f(lo)": objective(lo),
        "f(b-step)": objective(b_star - step),
        "f(b+step)": objective(b_star + step),
        "f(hi)": objective(hi),
    }
    if any(v < f_star for v in neighbours.values()):
        raise OptimizationError(
            "residue is not unimodal on the bracket",
            {"b": b_star, "f(b)": f_star, **neighbours},
        )

    logger.debug(f"optimal b for ({alpha}, {beta}): {b_star:.10g}, residue {f_star:.4e}")
    return QuadraticApprox(
        b=b_star,
        alpha=alpha,
        beta=beta,
        kind=ApproxKind.NUMERIC_OPTIMAL,
        admissible=b_star <= -2.0,
    )


def second_derivative_check(alpha: float, beta: float) -> float:
    """d^2P/db^2 at b_c, i.e. (beta - alpha)^2 / 15, confirmed by central differences.

    Raises:
        DomainError: Unless alpha < beta.
        NumericalCheckError: If the numerical second derivative disagrees by more
            than 1e-6 relative.
    """
    if not alpha < beta:
        raise DomainError(f"need alpha < beta, got ({alpha}, {beta})")
    analytic = (beta - alpha) ** 2 / 15.0
    b_c = -((2.0 - alpha) ** 2 + beta**2 - 2.0) / (2.0 * (beta - alpha))
    h = 1e-4
    numeric = (
        residue_estimate_squared(alpha, beta, b_c + h)
        - 2.0 * residue_estimate_squared(alpha, beta, b_c)
        + residue_estimate_squared(alpha, beta, b_c - h)
    ) / (h * h)
    if abs(numeric - analytic) > 1e-6 * analytic:
        raise NumericalCheckError(
            f"d2P/db2 at b_c: analytic {analytic:.10g}, numeric {numeric:.10g}"
        )
    return analytic
