import math

import numpy as np
import pytest

from funceq.core.approx import (
    GLOBAL_RESIDUE_BOUND,
    closed_form_approximation,
    golden_section,
    optimal_b,
    quadratic_eval,
    region_boundary_beta,
    residue_direct,
    residue_estimate_derivative,
    residue_estimate_squared,
    residue_l2,
    residue_pointwise,
    second_derivative_check,
    suboptimal_b,
)
from funceq.core.operator import distance
from funceq.core.solver import iterate
from funceq.exceptions import DomainError, SingularFormulaError
from funceq.models.approx import ApproxKind, QuadraticApprox
from funceq.models.equation import EquationSpec
from funceq.models.grid import GridFunction, Metric

BOUNDARY_BETA = region_boundary_beta(0.3)  # ~0.61797


def admissible_pairs(seed, count=20):
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(count):
        alpha = rng.uniform(0.01, 0.95)
        beta = rng.uniform(alpha + 1e-3 * (region_boundary_beta(alpha) - alpha), region_boundary_beta(alpha))
        pairs.append((float(alpha), float(beta)))
    return pairs


class TestSuboptimalB:
    def test_closed_form_value(self):
        q = suboptimal_b(0.3, 0.5)
        assert q.b == pytest.approx(-2.85, abs=1e-12)
        assert q.admissible
        assert q.kind is ApproxKind.SUBOPTIMAL_CLOSED_FORM

    def test_region_boundary(self):
        q = suboptimal_b(0.3, BOUNDARY_BETA)
        assert q.b == pytest.approx(-2.0, abs=1e-12)
        assert q.admissible

    def test_outside_region(self):
        q = suboptimal_b(0.3, 0.7)
        assert q.b > -2.0
        assert not q.admissible

    def test_equal_parameters_are_singular(self):
        with pytest.raises(SingularFormulaError, match="identity"):
            suboptimal_b(0.4, 0.4)

    def test_equal_parameters_give_identity(self):
        q = closed_form_approximation(0.4, 0.4)
        assert q.kind is ApproxKind.IDENTITY
        x = np.linspace(0, 1, 11)
        np.testing.assert_array_equal(quadratic_eval(q, x), x)

    def test_reversed_parameters(self):
        with pytest.raises(DomainError):
            suboptimal_b(0.5, 0.3)


class TestQuadraticEval:
    @pytest.mark.parametrize("b", [-2.85, -2.0, -7.5, 3.0])
    def test_boundary_values(self, b):
        q = QuadraticApprox(b=b, alpha=0.3, beta=0.5, kind=ApproxKind.NUMERIC_OPTIMAL, admissible=b <= -2)
        assert quadratic_eval(q, 0.0) == 0.0
        assert quadratic_eval(q, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_midpoint(self):
        assert quadratic_eval(suboptimal_b(0.3, 0.5), 0.5) == pytest.approx(0.635135135135, rel=1e-10)

    def test_near_identity(self):
        q = QuadraticApprox(b=-1e6, alpha=0.3, beta=0.5, kind=ApproxKind.NUMERIC_OPTIMAL, admissible=True)
        assert quadratic_eval(q, 0.25) == pytest.approx(0.25, abs=1e-5)

    def test_singular_b(self):
        q = QuadraticApprox(b=-1.0, alpha=0.3, beta=0.5, kind=ApproxKind.NUMERIC_OPTIMAL, admissible=False)
        with pytest.raises(DomainError):
            quadratic_eval(q, 0.5)

    @pytest.mark.parametrize("b", [-2.0, -2.85, -10.0])
    def test_increasing_and_concave(self, b):
        assert (2.0 + b) / (1.0 + b) >= 0.0
        assert 1.0 / (1.0 + b) < 0.0
        q = QuadraticApprox(b=b, alpha=0.3, beta=0.5, kind=ApproxKind.NUMERIC_OPTIMAL, admissible=True)
        values = quadratic_eval(q, np.linspace(0, 1, 101))
        assert np.all(np.diff(values) >= 0.0)
        assert np.all(np.diff(values, 2) <= 1e-15)


class TestResidues:
    def test_pointwise_vanishes_at_endpoints(self):
        assert residue_pointwise(0.3, 0.5, -2.85, 0.0) == 0.0
        assert residue_pointwise(0.3, 0.5, -2.85, 1.0) == 0.0

    def test_pointwise_matches_direct(self):
        assert residue_pointwise(0.3, 0.5, -2.85, 0.5) == pytest.approx(
            residue_direct(0.3, 0.5, -2.85, 0.5), abs=1e-12
        )

    def test_pointwise_needs_b_below_minus_one(self):
        with pytest.raises(DomainError):
            residue_pointwise(0.3, 0.5, -0.5, 0.5)

    def test_reference_case(self):
        report = residue_l2(0.3, 0.5, -2.85)
        assert 2.4e-3 <= report.l2_residue_true <= 3.6e-3
        assert report.l2_residue_estimate == pytest.approx(0.16 / math.sqrt(840), rel=1e-12)
        assert report.analytic_at_bc == pytest.approx(report.l2_residue_estimate, rel=1e-12)
        assert report.l2_residue_estimate / report.l2_residue_true == pytest.approx(1.85, rel=1e-6)

    def test_region_boundary_case(self):
        q = suboptimal_b(0.3, BOUNDARY_BETA)
        assert 0.008 <= residue_l2(0.3, BOUNDARY_BETA, q.b).l2_residue_true <= 0.012

    def test_global_bound_value(self):
        assert GLOBAL_RESIDUE_BOUND == pytest.approx(0.0118397, abs=1e-6)

    @pytest.mark.parametrize("alpha, beta", admissible_pairs(11))
    def test_quadrature_matches_closed_form(self, alpha, beta):
        b = suboptimal_b(alpha, beta).b
        report = residue_l2(alpha, beta, b)
        integral = (report.l2_residue_true * (-1.0 - b)) ** 2
        expected = (beta - alpha) ** 2 * (beta + alpha) ** 2 / 840.0
        assert integral == pytest.approx(expected, rel=1e-8)
        assert report.l2_residue_estimate <= GLOBAL_RESIDUE_BOUND + 1e-9
        assert report.l2_residue_estimate <= report.alpha_worst_case_bound + 1e-9

    @pytest.mark.parametrize("alpha, beta", admissible_pairs(5, count=5))
    def test_critical_point(self, alpha, beta):
        b = suboptimal_b(alpha, beta).b
        assert residue_estimate_derivative(alpha, beta, b) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("b", [-2.0, -3.0, -10.0])
    def test_majorant_ordering(self, b):
        report = residue_l2(0.3, 0.5, b)
        assert report.l2_residue_true <= report.l2_residue_estimate + 1e-9

    def test_estimate_is_the_square_root_of_p(self):
        assert residue_l2(0.2, 0.4, -5.0).l2_residue_estimate == pytest.approx(
            math.sqrt(residue_estimate_squared(0.2, 0.4, -5.0))
        )

    def test_limit_towards_identity(self):
        x = np.linspace(0.0, 1.0, 2049)
        gaps = []
        for delta in (1e-2, 1e-3):
            q = suboptimal_b(0.3, 0.3 + delta)
            gap = float(np.max(np.abs(quadratic_eval(q, x) - x)))
            assert gap < delta
            gaps.append(gap)
        assert gaps[1] < gaps[0]


class TestOptimalB:
    def test_golden_section_on_parabola(self):
        left, right = golden_section(lambda t: (t - 1.3) ** 2, -5.0, 5.0, 1e-8)
        assert right - left <= 1e-8
        assert 0.5 * (left + right) == pytest.approx(1.3, abs=1e-7)

    def test_dominates_closed_form(self):
        best = optimal_b(0.3, 0.5)
        assert best.kind is ApproxKind.NUMERIC_OPTIMAL
        assert (
            residue_l2(0.3, 0.5, best.b).l2_residue_true
            <= residue_l2(0.3, 0.5, -2.85).l2_residue_true
        )

    def test_optimal_quadratic_near_iterated_solution(self):
        # f^15 from the identity stands in for the solution at the region boundary
        beta = BOUNDARY_BETA
        best = optimal_b(0.3, beta)
        proxy = iterate(EquationSpec.paradise(0.3, beta), GridFunction.identity(2048), 15)[-1]
        f_opt = GridFunction.from_callable(best, 2048)
        assert 0.0126 <= distance(f_opt, proxy, Metric.L2) <= 0.0234

    def test_nearly_identical_curves(self):
        x = np.linspace(0.0, 1.0, 1025)
        best = optimal_b(0.1, 0.5)
        closed = suboptimal_b(0.1, 0.5)
        assert np.max(np.abs(quadratic_eval(best, x) - quadratic_eval(closed, x))) <= 0.02


class TestSecondDerivative:
    def test_values(self):
        assert second_derivative_check(0.3, 0.5) == pytest.approx(0.04 / 15)
        assert second_derivative_check(0.3, 0.7) == pytest.approx(0.16 / 15)

    def test_needs_ordered_parameters(self):
        with pytest.raises(DomainError):
            second_derivative_check(0.5, 0.5)
