"""Quadratic approximations of the paradise-fish solution and their residues."""

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from funceq.exceptions import DomainError


class ApproxKind(str, Enum):
    SUBOPTIMAL_CLOSED_FORM = "suboptimal_closed_form"
    NUMERIC_OPTIMAL = "numeric_optimal"
    IDENTITY = "identity"


class QuadraticApprox(BaseModel):
    """x -> x(x + b)/(1 + b); the identity when kind is ``identity``."""

    model_config = ConfigDict(frozen=True)

    b: float
    alpha: float = Field(gt=0, lt=1)
    beta: float = Field(gt=0, lt=1)
    kind: ApproxKind
    admissible: bool = Field(description="b <= -2: increasing and concave on [0, 1]")

    def __call__(self, x):
        if self.kind is ApproxKind.IDENTITY:
            return np.asarray(x, dtype=np.float64) * 1.0
        if self.b == -1.0:
            raise DomainError("x(x + b)/(1 + b) is singular at b = -1")
        x = np.asarray(x, dtype=np.float64)
        return x * (x + self.b) / (1.0 + self.b)


class ResidueReport(BaseModel):
    """True and estimated L2 residues of a quadratic, with the bound chain."""

    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float
    b: float
    l2_residue_true: float = Field(description="quadrature of (f~ - T f~)^2, square-rooted")
    l2_residue_estimate: float = Field(description="sqrt(P(b)), the 1/(-b-1) factor dropped")
    analytic_at_bc: float = Field(description="(beta^2 - alpha^2)/sqrt(840)")
    alpha_worst_case_bound: float = Field(
        description="((2 - sqrt(2 - alpha^2))^2 - alpha^2)/(2 sqrt(210))"
    )
    global_bound: float = Field(description="(2 - sqrt 2)^2/(2 sqrt(210))")
