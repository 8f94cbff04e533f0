"""Spec files read by the CLI, and the report every command prints.

A spec file is a JSON document in one of two forms::

    {"family": "paradise", "alpha": 0.1, "beta": 0.5}
    {"family": "exact", "alpha": 0.3, "beta": 0.7, "m": 4}

    {"phi": "x", "phi1": "alpha*x + 1 - alpha", "phi2": "beta*x",
     "params": {"alpha": 0.1, "beta": 0.2}}

Either form may add ``grid_n``, ``tol``, ``max_iter`` and ``metric``.
"""

import json
from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PrivateAttr,
    ValidationError,
    model_validator,
)

from funceq.core.exact_family import build_spec
from funceq.core.exprparse import CONSTANTS, FUNCTIONS, Expression
from funceq.exceptions import ParseError, SpecFileError
from funceq.models.equation import CustomFamily, EquationSpec, ExactFamily
from funceq.models.grid import Metric
from funceq.models.reports import ContractionReport, ExpFit, StopReason
from funceq.utils.helpers import substitute_parameters

COEFFICIENTS = ("phi", "phi1", "phi2")
RESERVED_NAMES = frozenset({"x", *CONSTANTS, *FUNCTIONS})


class SpecFile(BaseModel):
    """Family form or custom form, plus optional solver options."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    family: Optional[Literal["paradise", "exact"]] = Field(
        default=None, description="Built-in family name"
    )
    alpha: Optional[float] = Field(default=None, gt=0, lt=1)
    beta: Optional[float] = Field(default=None, gt=0, lt=1)
    m: Optional[float] = Field(default=None, gt=0, description="Exact family exponent")

    phi: Optional[str] = Field(default=None, description="Expression for phi")
    phi1: Optional[str] = Field(default=None, description="Expression for phi1")
    phi2: Optional[str] = Field(default=None, description="Expression for phi2")
    params: dict[str, float] = Field(
        default_factory=dict, description="Values substituted into the expressions"
    )

    grid_n: Optional[int] = Field(default=None, ge=2)
    tol: Optional[float] = Field(default=None, gt=0)
    max_iter: Optional[int] = Field(default=None, ge=1)
    metric: Optional[Metric] = None

    _origin: Optional[str] = PrivateAttr(default=None)

    @model_validator(mode="after")
    def _one_form(self) -> "SpecFile":
        custom = [getattr(self, name) is not None for name in COEFFICIENTS]
        if self.family is None:
            if not all(custom):
                raise ValueError(
                    "give either 'family' or all of 'phi', 'phi1', 'phi2'"
                )
            if self.alpha is not None or self.beta is not None or self.m is not None:
                raise ValueError("alpha, beta and m belong under 'params' in the custom form")
            reserved = sorted(RESERVED_NAMES.intersection(self.params))
            if reserved:
                raise ValueError(f"reserved names cannot be params: {', '.join(reserved)}")
            return self
        if any(custom) or self.params:
            raise ValueError("family form and custom form cannot be mixed")
        if self.alpha is None or self.beta is None:
            raise ValueError(f"family '{self.family}' needs alpha and beta")
        if self.family == "exact" and self.m is None:
            raise ValueError("family 'exact' needs m")
        if self.family == "paradise" and self.m is not None:
            raise ValueError("family 'paradise' takes no m")
        return self

    @property
    def is_custom(self) -> bool:
        return self.family is None

    def sources(self) -> dict[str, str]:
        """Custom expressions after parameter substitution."""
        return {
            name: substitute_parameters(getattr(self, name), self.params)
            for name in COEFFICIENTS
        }

    def to_equation_spec(self) -> EquationSpec:
        """Build the coefficient triple.

        Raises:
            SpecFileError: If a custom expression is malformed. The location
                names the coefficient, prefixed by the file it came from.
            ConstructionError: If the exact family cannot be built.
        """
        if self.family == "paradise":
            return EquationSpec.paradise(self.alpha, self.beta)
        if self.family == "exact":
            try:
                params = ExactFamily(alpha=self.alpha, beta=self.beta, m=self.m)
            except ValidationError as e:
                raise SpecFileError(_first_message(e), "family") from None
            return build_spec(params, check_nodes=self.grid_n)
        sources = self.sources()
        return EquationSpec(**self._parse_coefficients(sources), family=CustomFamily(sources=sources))

    def _parse_coefficients(self, sources: dict[str, str]) -> dict[str, Expression]:
        parsed = {}
        for name in COEFFICIENTS:
            try:
                parsed[name] = Expression(sources[name])
            except ParseError as e:
                location = f"{self._origin}:{name}" if self._origin else name
                raise SpecFileError(str(e), location) from e
        return parsed

    def echo(self) -> dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True, exclude_defaults=True)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SpecFile":
        """Read and validate a spec file.

        Raises:
            SpecFileError: With ``path:line:col`` for JSON syntax errors,
                ``path:field`` for schema violations, or ``path:phi2`` for
                a malformed coefficient expression.
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise SpecFileError(f"cannot read spec file: {e.strerror}", str(path)) from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecFileError(e.msg, f"{path}:{e.lineno}:{e.colno}") from None
        if not isinstance(data, dict):
            raise SpecFileError("top level must be an object", str(path))
        try:
            spec = cls.model_validate(data)
        except ValidationError as e:
            error = e.errors()[0]
            field = ".".join(str(p) for p in error["loc"]) or "(root)"
            raise SpecFileError(error["msg"], f"{path}:{field}") from None
        spec._origin = str(path)
        if spec.is_custom:
            spec._parse_coefficients(spec.sources())
        return spec


def _first_message(error: ValidationError) -> str:
    return error.errors()[0]["msg"]


class SolverSummary(BaseModel):
    """How a Picard run ended and the a-posteriori residual of its result."""

    iterations: int
    stop_reason: StopReason
    stop_metric: Metric
    final_step: float = Field(description="last inter-iterate distance in the stop metric")
    residual_sup: float
    residual_l2: float
    residual_lip: float
    seconds: float
    warnings: list[str] = Field(default_factory=list)


class RunReport(BaseModel):
    """Structured result of one command, printed to stdout as JSON."""

    command: str
    version: str
    input: dict[str, Any] = Field(default_factory=dict, description="spec and flag echo")
    certificate: Optional[ContractionReport] = None
    solver: Optional[SolverSummary] = None
    fit: Optional[ExpFit] = None
    results: dict[str, Any] = Field(default_factory=dict)
    outputs: dict[str, str] = Field(default_factory=dict, description="files written")
    exit_code: int = 0
    wall_seconds: float = 0.0

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)
