import numpy as np
import pytest

from funceq.core.mc_oracle import (
    GAMMA,
    AbsorptionOracle,
    estimate,
    mix64,
    path_seeds,
    simulate_path,
    step_uniforms,
)
from funceq.core.operator import evaluate
from funceq.core.solver import solve
from funceq.exceptions import DomainError, InvalidProbabilityError, ReliabilityError
from funceq.models.equation import EquationSpec
from funceq.models.grid import GridFunction
from funceq.models.oracle import ChainConfig, Outcome

CFG = ChainConfig(absorption_eps=1e-9, max_steps=10_000, base_seed=12345)


class TestRandomness:
    def test_splitmix_reference_output(self):
        # first output of SplitMix64 seeded with 0
        assert int(mix64(np.array([GAMMA]))[0]) == 0xE220A8397B1DCDAF

    def test_uniforms_in_unit_interval(self):
        u = step_uniforms(path_seeds(7, np.arange(10_000)), 3)
        assert u.min() >= 0.0 and u.max() < 1.0
        assert abs(u.mean() - 0.5) < 0.02

    def test_seeds_depend_on_index_only(self):
        np.testing.assert_array_equal(
            path_seeds(7, np.arange(5, 10)), path_seeds(7, np.arange(20))[5:10]
        )


class TestSimulatePath:
    def test_starts_inside_upper_band(self, paradise_slow):
        assert simulate_path(paradise_slow, 1 - 1e-12, CFG, 1) is Outcome.ABSORBED_ONE

    def test_starts_inside_lower_band(self, paradise_slow):
        assert simulate_path(paradise_slow, 1e-12, CFG, 1) is Outcome.ABSORBED_ZERO

    def test_deterministic(self, paradise_slow):
        outcomes = {simulate_path(paradise_slow, 0.5, CFG, 99) for _ in range(3)}
        assert len(outcomes) == 1

    def test_invalid_probability(self):
        spec = EquationSpec(phi=lambda x: x + 0.6, phi1=lambda x: x, phi2=lambda x: 0.5 * x)
        with pytest.raises(InvalidProbabilityError):
            simulate_path(spec, 0.5, CFG, 1)

    def test_outside_domain(self, paradise_slow):
        with pytest.raises(DomainError):
            simulate_path(paradise_slow, 1.5, CFG, 1)


class TestEstimate:
    def test_boundary_points(self, paradise_fast):
        assert estimate(paradise_fast, 0.0, 1000, CFG).p_hat == 0.0
        top = estimate(paradise_fast, 1.0, 1000, CFG)
        assert top.p_hat == 1.0
        assert top.ci_halfwidth == 0.0

    def test_agrees_with_solver(self, paradise_fast):
        solution, _ = solve(paradise_fast, GridFunction.identity(2048))
        result = estimate(paradise_fast, 0.5, 100_000, CFG)
        assert abs(result.p_hat - evaluate(solution, 0.5)) <= 3 * result.ci_halfwidth

    def test_exact_family(self, exact_quartic):
        result = estimate(exact_quartic, 0.5, 100_000, CFG)
        assert abs(result.p_hat - 0.0625) <= 3 * result.ci_halfwidth
        assert result.timeouts == 0

    def test_worker_count_does_not_matter(self, paradise_slow):
        one = AbsorptionOracle(paradise_slow, CFG, workers=1).estimate(0.4, 20_000)
        four = AbsorptionOracle(paradise_slow, CFG, workers=4).estimate(0.4, 20_000)
        assert one == four

    def test_interval_shrinks_with_samples(self, paradise_fast):
        small = estimate(paradise_fast, 0.5, 10_000, CFG)
        large = estimate(paradise_fast, 0.5, 40_000, CFG)
        assert large.ci_halfwidth / small.ci_halfwidth == pytest.approx(0.5, rel=0.2)

    def test_timeouts_raise(self, paradise_slow):
        cfg = ChainConfig(absorption_eps=1e-9, max_steps=1, base_seed=1)
        with pytest.raises(ReliabilityError, match="max_steps"):
            estimate(paradise_slow, 0.5, 1000, cfg)


@pytest.mark.slow
@pytest.mark.parametrize("family", ["paradise", "exact"])
def test_cross_validation_on_twenty_points(family, paradise_fast, exact_quartic):
    spec = paradise_fast if family == "paradise" else exact_quartic
    solution, _ = solve(spec, GridFunction.identity(2048))
    points = np.linspace(0.1, 0.9, 20)
    estimates = AbsorptionOracle(spec, CFG).estimate_many(points, 100_000)
    outside = [
        e.x for e in estimates if abs(e.p_hat - evaluate(solution, e.x)) > 3 * e.ci_halfwidth
    ]
    assert len(outside) <= 1
