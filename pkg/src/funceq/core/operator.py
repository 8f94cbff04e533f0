"""Grid evaluation, Lipschitz norms and distances, the operator T and its certificate.

T maps an admissible f to

    (Tf)(x) = phi(x) f(phi1(x)) + (1 - phi(x)) f(phi2(x)),

sampled on the grid of f. Because f is piecewise linear, each node value of Tf
is exact and sampling never increases the Lipschitz constant, so the operator
norm and contraction bounds hold literally at grid level.
"""

from typing import Union

import numpy as np
from scipy.integrate import trapezoid

from funceq.config.settings import settings_instance as settings
from funceq.exceptions import (
    CoefficientEvaluationError,
    DomainError,
    PreconditionError,
    RangeError,
    ShapeError,
)
from funceq.models.equation import EquationSpec, ParadiseFamily
from funceq.models.grid import GridFunction, Metric, grid_nodes
from funceq.models.reports import (
    BoundaryChecks,
    ContractionReport,
    NormSource,
    NormValue,
)
from funceq.utils.logging import logger

LEMMA_SLACK = 1e-9

ArrayLike = Union[float, np.ndarray]


def evaluate(f: GridFunction, x: ArrayLike) -> ArrayLike:
    """Evaluate a grid function by linear interpolation.

    Args:
        f: Grid function.
        x: Point or array of points in [0, 1].

    Returns:
        The interpolated value(s); exact node values at grid nodes.

    Raises:
        DomainError: If any point lies outside [0, 1].
    """
    xs = np.asarray(x, dtype=np.float64)
    inside = (xs >= 0.0) & (xs <= 1.0)
    if not np.all(inside):
        bad = np.atleast_1d(xs)[~np.atleast_1d(inside)]
        raise DomainError(f"evaluation point(s) outside [0, 1]: {bad[:5]}")
    out = np.interp(xs, f.nodes, f.values)
    return float(out) if out.ndim == 0 else out


def _grid_norm(values: np.ndarray, n_intervals: int) -> float:
    return float(abs(values[0]) + np.max(np.abs(np.diff(values))) * n_intervals)


def lipschitz_norm(f: GridFunction) -> float:
    """|f(0)| plus the largest adjacent-node slope.

    For a piecewise-linear function this is the exact Lipschitz norm.
    """
    return _grid_norm(f.values, f.n_intervals)


def distance(f: GridFunction, g: GridFunction, metric: Metric = Metric.L2) -> float:
    """Distance between two grid functions on the same grid.

    ``sup`` is the node-wise maximum, ``l2`` the square root of the trapezoid
    quadrature of (f - g)^2 and ``lip`` the Lipschitz norm of f - g.

    Raises:
        ShapeError: If the grids differ.
    """
    if f.n_intervals != g.n_intervals:
        raise ShapeError(
            f"grid mismatch: N = {f.n_intervals} vs N = {g.n_intervals}"
        )
    diff = f.values - g.values
    metric = Metric(metric)
    if metric is Metric.SUP:
        return float(np.max(np.abs(diff)))
    if metric is Metric.L2:
        return float(np.sqrt(trapezoid(diff * diff, dx=1.0 / f.n_intervals)))
    return _grid_norm(diff, f.n_intervals)


def sample_coefficient(spec: EquationSpec, name: str, x: np.ndarray) -> np.ndarray:
    """Evaluate one of phi, phi1, phi2 on an array of points.

    Raises:
        CoefficientEvaluationError: If evaluation fails or is not finite.
    """
    fn = getattr(spec, name)
    try:
        with np.errstate(all="ignore"):
            out = np.asarray(fn(x), dtype=np.float64)
        out = np.broadcast_to(out, np.shape(x))
    except CoefficientEvaluationError:
        raise
    except Exception as e:
        where = getattr(e, "x", x[0] if np.ndim(x) and np.size(x) else x)
        raise CoefficientEvaluationError(name, where, e) from e
    bad = ~np.isfinite(out)
    if np.any(bad):
        where = np.asarray(x)[bad][0] if np.ndim(x) else x
        raise CoefficientEvaluationError(name, float(where), ValueError("non-finite value"))
    return out


def clamp_to_unit(
    name: str, x: np.ndarray, values: np.ndarray, tol: float
) -> np.ndarray:
    """Clip phi1/phi2 outputs into [0, 1], rejecting values beyond the tolerance band."""
    bad = (values < -tol) | (values > 1.0 + tol)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise RangeError(name, i, float(x[i]), float(values[i]))
    return np.clip(values, 0.0, 1.0)


def apply_operator(spec: EquationSpec, f: GridFunction) -> GridFunction:
    """One application of T on the grid of ``f``.

    Raises:
        PreconditionError: If ``f`` is not admissible.
        RangeError: If phi1 or phi2 leave [0, 1] beyond the tolerance band.
        PreconditionError: If the endpoints of Tf miss 0 and 1 beyond tolerance
            (the coefficients violate the boundary hypotheses).
    """
    if not f.admissible:
        raise PreconditionError(
            f"f must satisfy f(0) = 0 and f(1) = 1, got {f.values[0]!r} and {f.values[-1]!r}"
        )
    x = f.nodes
    p = sample_coefficient(spec, "phi", x)
    a = clamp_to_unit("phi1", x, sample_coefficient(spec, "phi1", x), settings.range_tol)
    b = clamp_to_unit("phi2", x, sample_coefficient(spec, "phi2", x), settings.range_tol)

    values = p * np.interp(a, x, f.values) + (1.0 - p) * np.interp(b, x, f.values)

    tol = settings.boundary_tol
    if abs(values[0]) > tol or abs(values[-1] - 1.0) > tol:
        raise PreconditionError(
            f"Tf(0) = {values[0]!r}, Tf(1) = {values[-1]!r}: coefficients violate the boundary hypotheses"
        )
    values[0] = 0.0
    values[-1] = 1.0
    return GridFunction(values=values)


def certify(spec: EquationSpec, grid_n: int) -> ContractionReport:
    """Check the hypotheses and compute the contraction certificate.

    Analytic norms are used when the EquationSpec carries them; otherwise the norms
    are grid estimates, which are lower bounds and make the verdict heuristic.
    """
    x = grid_nodes(grid_n)
    phi = sample_coefficient(spec, "phi", x)
    phi1 = sample_coefficient(spec, "phi1", x)
    phi2 = sample_coefficient(spec, "phi2", x)

    tol = settings.boundary_tol
    checks = BoundaryChecks(
        phi_at_0=bool(abs(phi[0]) <= tol),
        phi_at_1=bool(abs(phi[-1] - 1.0) <= tol),
        phi1_at_1=bool(abs(phi1[-1] - 1.0) <= tol),
        phi2_at_0=bool(abs(phi2[0]) <= tol),
    )
    rtol = settings.range_tol
    range_ok = bool(
        np.all((phi1 >= -rtol) & (phi1 <= 1.0 + rtol))
        and np.all((phi2 >= -rtol) & (phi2 <= 1.0 + rtol))
    )

    if spec.analytic_norms is not None:
        n = spec.analytic_norms
        norm_phi = NormValue(value=n.norm_phi, source=NormSource.ANALYTIC)
        norm_phi1 = NormValue(value=n.norm_phi1, source=NormSource.ANALYTIC)
        norm_phi2 = NormValue(value=n.norm_phi2, source=NormSource.ANALYTIC)
        phi1_at_0 = NormValue(value=n.phi1_at_0, source=NormSource.ANALYTIC)
    else:
        norm_phi = NormValue(value=_grid_norm(phi, grid_n), source=NormSource.GRID_ESTIMATE)
        norm_phi1 = NormValue(value=_grid_norm(phi1, grid_n), source=NormSource.GRID_ESTIMATE)
        norm_phi2 = NormValue(value=_grid_norm(phi2, grid_n), source=NormSource.GRID_ESTIMATE)
        phi1_at_0 = NormValue(value=float(phi1[0]), source=NormSource.GRID_ESTIMATE)

    c = 2.0 * norm_phi.value * (norm_phi1.value - phi1_at_0.value + norm_phi2.value)
    bound = (
        2.0 * norm_phi.value * (norm_phi1.value + norm_phi2.value)
        - norm_phi.value * phi1_at_0.value
    )
    deviation = float(np.max(np.abs(phi - 1.0)))
    lemma_ok = deviation <= norm_phi.value + LEMMA_SLACK

    remark_sum = None
    if isinstance(spec.family, ParadiseFamily):
        remark_sum = spec.family.alpha + spec.family.beta

    hypotheses_ok = checks.all_passed and range_ok
    report = ContractionReport(
        family_tag=spec.family_tag,
        grid_n=grid_n,
        boundary_checks=checks,
        range_ok=range_ok,
        norm_phi=norm_phi,
        norm_phi1=norm_phi1,
        norm_phi2=norm_phi2,
        phi1_at_0=phi1_at_0,
        contraction_constant=max(c, 0.0),
        operator_norm_bound=max(bound, 0.0),
        max_phi_deviation=deviation,
        lemma_bound_ok=lemma_ok,
        remark_sum=remark_sum,
        guaranteed=hypotheses_ok and c < 1.0,
    )

    if not hypotheses_ok:
        logger.warning(
            f"{spec.family_tag}: hypotheses fail ({', '.join(checks.failed()) or 'range'})"
        )
    elif report.heuristic:
        logger.info(
            f"{spec.family_tag}: norms are grid lower bounds, the certificate is heuristic"
        )
    logger.debug(f"{spec.family_tag}: c = {report.contraction_constant:.6g}, guaranteed = {report.guaranteed}")
    return report
