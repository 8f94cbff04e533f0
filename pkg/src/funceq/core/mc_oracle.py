"""Monte-Carlo absorption oracle for cross-validating the Picard solution.

From state x the chain jumps to phi1(x) with probability phi(x) and to phi2(x)
otherwise. Any bounded solution of the equation is harmonic for this chain, so
the fixed point at x equals the probability of absorption near 1. This is an
engineering cross-check; the solver's definition of the solution stays the
fixed point of T.

Randomness is counter based: the seed of path i is mix64(base + GAMMA*(i+1))
and the uniform used at step k is mix64(seed + GAMMA*(k+1)) >> 11 scaled by
2^-53, where mix64 is the SplitMix64 finaliser

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

(a bijection of 64-bit integers). A path's draws therefore depend only on
(base_seed, path index), and batches are split into fixed-size chunks, so
results do not depend on worker count or scheduling.
"""

import asyncio
import math
from typing import Optional, Sequence

import numpy as np

from funceq.config.settings import settings_instance as settings
from funceq.core.operator import clamp_to_unit, sample_coefficient
from funceq.exceptions import DomainError, InvalidProbabilityError, ReliabilityError
from funceq.models.equation import EquationSpec
from funceq.models.oracle import ChainConfig, OracleEstimate, Outcome
from funceq.utils.helpers import chunk_ranges
from funceq.utils.logging import LoggerMixin

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TWO_POW_53 = float(2**53)
Z_99 = 2.576
PROBABILITY_SLACK = 1e-9

_ACTIVE, _ONE, _ZERO, _TIMEOUT = 0, 1, 2, 3


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def path_seeds(base_seed: int, indices: np.ndarray) -> np.ndarray:
    """Per-path seeds mix64(base_seed + GAMMA * (index + 1))."""
    idx = np.asarray(indices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(np.uint64(base_seed) + GAMMA * (idx + np.uint64(1)))


def step_uniforms(seeds: np.ndarray, step: int) -> np.ndarray:
    """Uniform draws in [0, 1) for the given step of each path."""
    with np.errstate(over="ignore"):
        z = mix64(seeds + GAMMA * np.uint64(step + 1))
    return (z >> np.uint64(11)).astype(np.float64) / _TWO_POW_53


class AbsorptionOracle(LoggerMixin):
    """Simulates the absorbing chain of a spec in deterministic, chunked batches."""

    def __init__(
        self,
        spec: EquationSpec,
        cfg: Optional[ChainConfig] = None,
        workers: Optional[int] = None,
        chunk_size: Optional[int] = None,
    ):
        self.spec = spec
        self.cfg = cfg or ChainConfig()
        self.workers = workers or settings.oracle_workers
        self.chunk_size = chunk_size or settings.oracle_chunk_size

    def _classify(self, x: np.ndarray) -> np.ndarray:
        eps = self.cfg.absorption_eps
        state = np.full(x.shape, _ACTIVE, dtype=np.int8)
        state[x < eps] = _ZERO
        state[x > 1.0 - eps] = _ONE
        return state

    def _run(self, x0: float, seeds: np.ndarray) -> np.ndarray:
        """Advance every path to absorption or timeout; returns the final states."""
        x = np.full(seeds.shape, float(x0))
        state = self._classify(x)
        for k in range(self.cfg.max_steps):
            idx = np.flatnonzero(state == _ACTIVE)
            if idx.size == 0:
                break
            xa = x[idx]
            p = sample_coefficient(self.spec, "phi", xa)
            bad = (p < -PROBABILITY_SLACK) | (p > 1.0 + PROBABILITY_SLACK)
            if np.any(bad):
                i = int(np.argmax(bad))
                raise InvalidProbabilityError(float(xa[i]), float(p[i]))
            up = clamp_to_unit("phi1", xa, sample_coefficient(self.spec, "phi1", xa), settings.range_tol)
            down = clamp_to_unit("phi2", xa, sample_coefficient(self.spec, "phi2", xa), settings.range_tol)
            u = step_uniforms(seeds[idx], k)
            x[idx] = np.where(u < p, up, down)
            state[idx] = self._classify(x[idx])
        state[state == _ACTIVE] = _TIMEOUT
        return state

    def simulate_path(self, x0: float, path_seed: int) -> Outcome:
        """Run one path from x0 with the given path seed."""
        if not 0.0 <= x0 <= 1.0:
            raise DomainError(f"start point {x0} outside [0, 1]")
        state = int(self._run(x0, np.array([path_seed], dtype=np.uint64))[0])
        return {_ONE: Outcome.ABSORBED_ONE, _ZERO: Outcome.ABSORBED_ZERO}.get(
            state, Outcome.TIMEOUT
        )

    def _run_chunk(self, x0: float, paths: range) -> tuple[int, int]:
        seeds = path_seeds(self.cfg.base_seed, np.arange(paths.start, paths.stop))
        state = self._run(x0, seeds)
        return int(np.count_nonzero(state == _ONE)), int(np.count_nonzero(state == _TIMEOUT))

    async def _run_chunks(self, x0: float, samples: int) -> list[tuple[int, int]]:
        semaphore = asyncio.Semaphore(self.workers)

        async def run(paths: range) -> tuple[int, int]:
            async with semaphore:
                return await asyncio.to_thread(self._run_chunk, x0, paths)

        return await asyncio.gather(
            *(run(paths) for paths in chunk_ranges(samples, self.chunk_size))
        )

    def estimate(self, x: float, samples: Optional[int] = None) -> OracleEstimate:
        """Estimate the absorption probability near 1 from x.

        Raises:
            DomainError: If x is outside [0, 1].
            ReliabilityError: If more than the tolerated fraction of paths time out.
        """
        samples = samples or settings.oracle_samples
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"point {x} outside [0, 1]")
        results = asyncio.run(self._run_chunks(x, samples))
        ones = sum(r[0] for r in results)
        timeouts = sum(r[1] for r in results)
        if timeouts > settings.timeout_fraction * samples:
            raise ReliabilityError(
                f"{timeouts} of {samples} paths from x = {x} timed out after "
                f"{self.cfg.max_steps} steps; increase max_steps"
            )
        finished = samples - timeouts
        p_hat = ones / finished
        ci = Z_99 * math.sqrt(p_hat * (1.0 - p_hat) / finished)
        if timeouts:
            self.logger.warning(f"{timeouts} timed-out paths from x = {x} excluded")
        self.logger.debug(f"x = {x}: p_hat = {p_hat:.6f} +/- {ci:.2e} ({samples} paths)")
        return OracleEstimate(
            x=x,
            p_hat=p_hat,
            samples=samples,
            absorbed_one=ones,
            ci_halfwidth=ci,
            timeouts=timeouts,
        )

    def estimate_many(
        self, points: Sequence[float], samples: Optional[int] = None
    ) -> list[OracleEstimate]:
        """Estimate several start points in order, each with its own batch of paths.

        Args:
            points: Start points in [0, 1].
            samples: Paths per point; defaults to the configured sample count.

        Returns:
            One estimate per point, in the order given.
        """
        return [self.estimate(x, samples) for x in points]


def simulate_path(
    spec: EquationSpec, x0: float, cfg: ChainConfig, path_seed: int
) -> Outcome:
    """Run a single chain path.

    Args:
        spec: Coefficients driving the chain.
        x0: Start point in [0, 1].
        cfg: Absorption band, step cap and base seed.
        path_seed: Seed of this path, usually from ``path_seeds``.

    Returns:
        Where the path ended.
    """
    return AbsorptionOracle(spec, cfg).simulate_path(x0, path_seed)


def estimate(
    spec: EquationSpec,
    x: float,
    samples: int,
    cfg: ChainConfig,
    workers: Optional[int] = None,
) -> OracleEstimate:
    """Estimate the probability that the chain started at x is absorbed near 1.

    Args:
        spec: Coefficients driving the chain.
        x: Start point in [0, 1].
        samples: Number of paths.
        cfg: Absorption band, step cap and base seed.
        workers: Concurrent chunk workers; the result does not depend on it.

    Returns:
        The estimate with its 99% confidence half-width and timeout count.
    """
    return AbsorptionOracle(spec, cfg, workers=workers).estimate(x, samples)
