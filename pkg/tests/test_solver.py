import numpy as np
import pytest

from funceq.core.operator import certify, distance
from funceq.core.solver import fit_exponential, fit_series, iterate, residual, solve
from funceq.exceptions import BoundaryCheckError, DegenerateFitError, PreconditionError
from funceq.models.equation import EquationSpec
from funceq.models.grid import GridFunction, Metric
from funceq.models.reports import ConvergenceHistory, IterationRecord, StopReason


def synthetic_history(distances):
    records = [
        IterationRecord(n=n, d_sup=d, d_l2=d, d_lip=d, seconds=0.0)
        for n, d in enumerate(distances, start=1)
    ]
    return ConvergenceHistory(records=records)


class TestSolve:
    def test_fixed_point_start_stops_at_once(self, exact_quartic):
        f0 = GridFunction.from_callable(lambda x: x**4, 4096)
        final, history = solve(exact_quartic, f0, tol=1e-6, max_iter=50, stop_metric=Metric.SUP)
        assert history.iterations == 1
        assert history.stop_reason is StopReason.TOLERANCE
        assert distance(final, f0, Metric.SUP) <= 1e-6

    def test_convergence_rate(self, paradise_slow, sine_init):
        f0 = GridFunction.from_callable(sine_init, 2048)
        _, history = solve(paradise_slow, f0, tol=1e-15, max_iter=30)
        assert history.iterations == 30
        fit = fit_exponential(history, Metric.L2)
        assert 0.46 <= fit.ratio <= 0.62

    def test_uncertified_spec_warns(self, paradise_slow):
        _, history = solve(paradise_slow, GridFunction.identity(64), max_iter=3)
        assert history.warnings
        assert "not guaranteed" in history.warnings[0]

    def test_history_matches_operator_applications(self, paradise_fast):
        _, history = solve(paradise_fast, GridFunction.identity(64), tol=1e-300, max_iter=7)
        assert history.iterations == 7
        assert [r.n for r in history.records] == list(range(1, 8))
        assert history.stop_reason is StopReason.MAX_ITERATIONS

    def test_every_iterate_admissible(self, paradise_slow, sine_init):
        f0 = GridFunction.from_callable(sine_init, 128)
        assert all(f.admissible for f in iterate(paradise_slow, f0, 10))

    def test_rejects_inadmissible_start(self, paradise_fast):
        with pytest.raises(PreconditionError):
            solve(paradise_fast, GridFunction.zeros(16))

    def test_rejects_failed_boundary_checks(self):
        spec = EquationSpec(phi=lambda x: x, phi1=lambda x: 0.5 * x + 0.5, phi2=lambda x: 0.5 * x + 0.1)
        with pytest.raises(BoundaryCheckError, match=r"phi2\(0\) = 0"):
            solve(spec, GridFunction.identity(16))

    def test_rejects_bad_tolerance(self, paradise_fast):
        with pytest.raises(PreconditionError):
            solve(paradise_fast, GridFunction.identity(16), tol=0.0)

    def test_initial_condition_independence(self, paradise_fast, sine_init):
        tol = 1e-10
        a, _ = solve(paradise_fast, GridFunction.identity(2048), tol=tol, stop_metric=Metric.SUP)
        b, _ = solve(
            paradise_fast,
            GridFunction.from_callable(sine_init, 2048),
            tol=tol,
            stop_metric=Metric.SUP,
        )
        assert distance(a, b, Metric.SUP) <= 10 * tol

    def test_guaranteed_steps_contract(self, paradise_fast, sine_init):
        c = certify(paradise_fast, 512).contraction_constant
        _, history = solve(paradise_fast, GridFunction.from_callable(sine_init, 512))
        steps = history.series(Metric.LIP)
        assert np.all(steps[1:] <= c * steps[:-1] + 1e-9)

    def test_deterministic(self, paradise_slow, sine_init):
        f0 = GridFunction.from_callable(sine_init, 256)
        a, ha = solve(paradise_slow, f0, max_iter=20)
        b, hb = solve(paradise_slow, f0, max_iter=20)
        assert a == b
        np.testing.assert_array_equal(ha.series(Metric.L2), hb.series(Metric.L2))


class TestFits:
    def test_exact_log_linear_data(self):
        history = synthetic_history([0.1 * 2.0**-n for n in range(1, 11)])
        fit = fit_exponential(history, Metric.SUP, skip_first=0)
        assert fit.amplitude == pytest.approx(0.1, rel=1e-12)
        assert fit.ratio == pytest.approx(0.5, rel=1e-12)
        assert fit.r_squared == pytest.approx(1.0)

    def test_zero_distance_is_degenerate(self):
        with pytest.raises(DegenerateFitError, match="reduce the number of iterations"):
            fit_exponential(synthetic_history([1e-3, 1e-4, 0.0, 0.0, 0.0]), skip_first=0)

    def test_too_few_points(self):
        with pytest.raises(DegenerateFitError):
            fit_series([0.1, 0.05, 0.025], skip_first=2)

    def test_start_index_shifts_amplitude_only(self):
        values = [3.0 * 0.7**n for n in range(0, 8)]
        fit = fit_series(values, start_index=0)
        assert fit.amplitude == pytest.approx(3.0, rel=1e-12)
        assert fit.ratio == pytest.approx(0.7, rel=1e-12)


class TestResidual:
    def test_identity_is_not_the_fixed_point(self, paradise_fast):
        assert residual(paradise_fast, GridFunction.identity(2048), Metric.L2) > 1e-3

    def test_fifteenth_iterate_is_a_good_proxy(self, paradise_slow):
        proxy = iterate(paradise_slow, GridFunction.identity(2048), 15)[-1]
        assert residual(paradise_slow, proxy, Metric.L2) <= 1e-3

    def test_exact_solution(self, exact_quartic):
        f = GridFunction.from_callable(lambda x: x**4, 4096)
        assert residual(exact_quartic, f, Metric.SUP) <= 1e-6
