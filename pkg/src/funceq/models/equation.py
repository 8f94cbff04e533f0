"""The coefficient triple (phi, phi1, phi2) of f = phi*f(phi1) + (1-phi)*f(phi2)."""

from enum import Enum
from typing import Annotated, Callable, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

CoefficientFn = Callable[[np.ndarray], np.ndarray]


class FamilyKind(str, Enum):
    PARADISE = "paradise"
    EXACT = "exact"
    CUSTOM = "custom"


class ParadiseFamily(BaseModel):
    """phi(x) = x, phi1(x) = alpha*x + 1 - alpha, phi2(x) = beta*x."""

    model_config = ConfigDict(frozen=True)

    kind: Literal[FamilyKind.PARADISE] = FamilyKind.PARADISE
    alpha: float = Field(gt=0, lt=1, description="Reward learning rate")
    beta: float = Field(gt=0, lt=1, description="Non-reward learning rate")


class ExactFamily(BaseModel):
    """Coefficient family whose fixed point is x^m."""

    model_config = ConfigDict(frozen=True)

    kind: Literal[FamilyKind.EXACT] = FamilyKind.EXACT
    alpha: float = Field(gt=0, lt=1)
    beta: float = Field(gt=0, lt=1)
    m: float = Field(gt=0, description="Exponent of the exact solution x^m")

    @model_validator(mode="after")
    def _ordered(self) -> "ExactFamily":
        if self.alpha > self.beta:
            raise ValueError("exact family requires alpha <= beta")
        return self


class CustomFamily(BaseModel):
    """User-defined coefficients; sources echo the substituted expression text."""

    model_config = ConfigDict(frozen=True)

    kind: Literal[FamilyKind.CUSTOM] = FamilyKind.CUSTOM
    sources: dict[str, str] = Field(default_factory=dict)


Family = Annotated[
    Union[ParadiseFamily, ExactFamily, CustomFamily], Field(discriminator="kind")
]


class AnalyticNorms(BaseModel):
    """Known Lipschitz norms of the coefficient functions."""

    model_config = ConfigDict(frozen=True)

    norm_phi: float = Field(ge=0)
    norm_phi1: float = Field(ge=0)
    norm_phi2: float = Field(ge=0)
    phi1_at_0: float = Field(ge=0)


class EquationSpec(BaseModel):
    """Evaluable coefficients plus the family they came from.

    The callables must accept numpy arrays and broadcast elementwise.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    phi: CoefficientFn
    phi1: CoefficientFn
    phi2: CoefficientFn
    analytic_norms: Optional[AnalyticNorms] = None
    family: Family = Field(default_factory=CustomFamily)

    @model_validator(mode="after")
    def _paradise_norms(self) -> "EquationSpec":
        if isinstance(self.family, ParadiseFamily):
            a, b = self.family.alpha, self.family.beta
            expected = AnalyticNorms(
                norm_phi=1.0, norm_phi1=1.0, norm_phi2=b, phi1_at_0=1.0 - a
            )
            if self.analytic_norms != expected:
                raise ValueError("paradise family requires its analytic norms")
        return self

    @property
    def family_tag(self) -> str:
        f = self.family
        if isinstance(f, ParadiseFamily):
            return f"paradise({f.alpha}, {f.beta})"
        if isinstance(f, ExactFamily):
            return f"exact({f.alpha}, {f.beta}, m={f.m})"
        return "custom"

    @classmethod
    def paradise(cls, alpha: float, beta: float) -> "EquationSpec":
        """The paradise-fish instance of the equation."""
        family = ParadiseFamily(alpha=alpha, beta=beta)
        return cls(
            phi=lambda x: x,
            phi1=lambda x: alpha * x + (1.0 - alpha),
            phi2=lambda x: beta * x,
            analytic_norms=AnalyticNorms(
                norm_phi=1.0, norm_phi1=1.0, norm_phi2=beta, phi1_at_0=1.0 - alpha
            ),
            family=family,
        )
