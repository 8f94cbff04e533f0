"""Piecewise-linear grid functions on [0, 1]."""

from enum import Enum
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from funceq.exceptions import DomainError


class Metric(str, Enum):
    """Distances between grid functions."""

    SUP = "sup"
    L2 = "l2"
    LIP = "lip"


class GridFunction(BaseModel):
    """Node values of a Lipschitz function at x_i = i/N, linearly interpolated in between."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray = Field(description="Node values at x_i = i/N")

    @field_validator("values", mode="before")
    @classmethod
    def _as_readonly_array(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 3:
            raise ValueError("values must be a 1-D sequence of length N+1 with N >= 2")
        if not np.all(np.isfinite(arr)):
            raise ValueError("values must be finite")
        arr.setflags(write=False)
        return arr

    @property
    def n_intervals(self) -> int:
        """Number of grid intervals N."""
        return self.values.size - 1

    @property
    def nodes(self) -> np.ndarray:
        """Grid nodes x_i = i/N."""
        return grid_nodes(self.n_intervals)

    @property
    def admissible(self) -> bool:
        """Membership in D^{0,1}: exact endpoint values 0 and 1."""
        return self.values[0] == 0.0 and self.values[-1] == 1.0

    @classmethod
    def from_callable(cls, fn: Callable, n_intervals: int) -> "GridFunction":
        """Sample a vectorised function at the nodes of an N-interval grid."""
        x = grid_nodes(n_intervals)
        return cls(values=np.broadcast_to(np.asarray(fn(x), dtype=np.float64), x.shape))

    @classmethod
    def identity(cls, n_intervals: int) -> "GridFunction":
        return cls(values=grid_nodes(n_intervals))

    @classmethod
    def zeros(cls, n_intervals: int) -> "GridFunction":
        return cls(values=np.zeros(n_intervals + 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridFunction):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self) -> int:
        return hash(self.values.tobytes())


def grid_nodes(n_intervals: int) -> np.ndarray:
    """Uniform nodes i/N, i = 0..N, with both endpoints exact."""
    if n_intervals < 2:
        raise DomainError(f"grid needs N >= 2 intervals, got {n_intervals}")
    return np.arange(n_intervals + 1, dtype=np.float64) / n_intervals
