"""Configuration and results of the absorption-probability oracle."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from funceq.config.settings import settings_instance as settings


class Outcome(str, Enum):
    ABSORBED_ONE = "absorbed_one"
    ABSORBED_ZERO = "absorbed_zero"
    TIMEOUT = "timeout"


class ChainConfig(BaseModel):
    """Absorption band, step cap and base seed of the chain x -> phi1(x) | phi2(x)."""

    model_config = ConfigDict(frozen=True)

    absorption_eps: float = Field(
        default_factory=lambda: settings.absorption_eps, gt=0, lt=0.5
    )
    max_steps: int = Field(default_factory=lambda: settings.max_steps, ge=1)
    base_seed: int = Field(default_factory=lambda: settings.base_seed, ge=0, lt=2**64)


class OracleEstimate(BaseModel):
    """Fraction of paths from x absorbed near 1, with a 99% normal half-width."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(ge=0, le=1)
    p_hat: float = Field(ge=0, le=1)
    samples: int = Field(ge=1)
    absorbed_one: int = Field(ge=0)
    ci_halfwidth: float = Field(ge=0)
    timeouts: int = Field(ge=0)

    @model_validator(mode="after")
    def _counts(self) -> "OracleEstimate":
        if self.timeouts > self.samples:
            raise ValueError("timeouts cannot exceed samples")
        return self
