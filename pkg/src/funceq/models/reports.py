"""Certificates, convergence histories and fits produced by the core and solver."""

from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from funceq.models.grid import GridFunction, Metric


class NormSource(str, Enum):
    ANALYTIC = "analytic"
    GRID_ESTIMATE = "grid-estimate"


class NormValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    source: NormSource


class BoundaryChecks(BaseModel):
    """The four boundary hypotheses, each to within the boundary tolerance."""

    model_config = ConfigDict(frozen=True)

    phi_at_0: bool = Field(description="phi(0) = 0")
    phi_at_1: bool = Field(description="phi(1) = 1")
    phi1_at_1: bool = Field(description="phi1(1) = 1")
    phi2_at_0: bool = Field(description="phi2(0) = 0")

    @property
    def all_passed(self) -> bool:
        return self.phi_at_0 and self.phi_at_1 and self.phi1_at_1 and self.phi2_at_0

    def failed(self) -> list[str]:
        labels = {
            "phi_at_0": "phi(0) = 0",
            "phi_at_1": "phi(1) = 1",
            "phi1_at_1": "phi1(1) = 1",
            "phi2_at_0": "phi2(0) = 0",
        }
        return [text for name, text in labels.items() if not getattr(self, name)]


class ContractionReport(BaseModel):
    """Hypothesis checks, norm data and the contraction verdict for a spec."""

    model_config = ConfigDict(frozen=True)

    family_tag: str
    grid_n: int
    boundary_checks: BoundaryChecks
    range_ok: bool = Field(description="phi1 and phi2 map the nodes into [0, 1]")
    norm_phi: NormValue
    norm_phi1: NormValue
    norm_phi2: NormValue
    phi1_at_0: NormValue
    contraction_constant: float = Field(
        ge=0, description="c = 2|phi|(|phi1| - phi1(0) + |phi2|)"
    )
    operator_norm_bound: float = Field(
        ge=0, description="2|phi|(|phi1| + |phi2|) - |phi| phi1(0)"
    )
    max_phi_deviation: float = Field(description="max over nodes of |phi(x_i) - 1|")
    lemma_bound_ok: bool = Field(description="max |phi(x_i) - 1| <= |phi| + 1e-9")
    remark_sum: Optional[float] = Field(
        default=None, description="alpha + beta for the paradise family"
    )
    guaranteed: bool = Field(description="hypotheses hold and c < 1")

    @model_validator(mode="after")
    def _verdict_consistent(self) -> "ContractionReport":
        if self.guaranteed and not self.contraction_constant < 1.0:
            raise ValueError("guaranteed requires c < 1")
        return self

    @computed_field
    @property
    def hypotheses_ok(self) -> bool:
        return self.boundary_checks.all_passed and self.range_ok

    @computed_field
    @property
    def heuristic(self) -> bool:
        """True when any norm is a grid lower-bound estimate rather than analytic."""
        return any(
            v.source is NormSource.GRID_ESTIMATE
            for v in (self.norm_phi, self.norm_phi1, self.norm_phi2, self.phi1_at_0)
        )


class StopReason(str, Enum):
    TOLERANCE = "tolerance"
    MAX_ITERATIONS = "max_iterations"


class IterationRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    d_sup: float = Field(ge=0)
    d_l2: float = Field(ge=0)
    d_lip: float = Field(ge=0)
    seconds: float = Field(ge=0)

    def distance(self, metric: Metric) -> float:
        return {Metric.SUP: self.d_sup, Metric.L2: self.d_l2, Metric.LIP: self.d_lip}[
            Metric(metric)
        ]


class ConvergenceHistory(BaseModel):
    """Inter-iterate distances of one Picard run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    records: list[IterationRecord] = Field(default_factory=list)
    final: Optional[GridFunction] = None
    stop_reason: Optional[StopReason] = None
    stop_metric: Metric = Metric.L2
    warnings: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _increasing(self) -> "ConvergenceHistory":
        for expected, rec in enumerate(self.records, start=1):
            if rec.n != expected:
                raise ValueError("iteration indices must run 1, 2, ... without gaps")
        return self

    @property
    def iterations(self) -> int:
        return len(self.records)

    def series(self, metric: Metric) -> np.ndarray:
        return np.array([r.distance(metric) for r in self.records])

    @property
    def total_seconds(self) -> float:
        return sum(r.seconds for r in self.records)


class ExpFit(BaseModel):
    """distance(n) ~ amplitude * exp(-rate * n)."""

    model_config = ConfigDict(frozen=True)

    amplitude: float = Field(gt=0)
    rate: float
    r_squared: float
    points: int

    @computed_field
    @property
    def ratio(self) -> float:
        """Per-step contraction factor exp(-rate)."""
        return float(np.exp(-self.rate))
