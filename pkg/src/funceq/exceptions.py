"""Exception hierarchy shared by the library and the command-line front door.

Each class carries the process exit status the CLI reports for it: 1 for
invalid input, 3 for runtime numerical failures.
"""

from typing import Any, Optional


class FuncEqError(Exception):
    """Base class for every error raised by funceq."""

    exit_code = 3


class InputError(FuncEqError):
    """Invalid input supplied by the caller."""

    exit_code = 1


class NumericalError(FuncEqError):
    """A computation could not deliver a trustworthy result."""

    exit_code = 3


class DomainError(InputError, ValueError):
    """A point or parameter lies outside the domain of an operation."""


class ShapeError(InputError, ValueError):
    """Two grid functions do not share the same resolution."""


class PreconditionError(InputError, ValueError):
    """An operation was called with an input that violates its precondition."""


class UsageError(InputError):
    """Invalid combination of command-line arguments."""


class SpecFileError(InputError):
    """A spec file could not be read, parsed or validated."""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class OutputFileError(InputError):
    """An output file could not be written."""

    def __init__(self, path: str, cause: Exception):
        self.path = path
        super().__init__(f"cannot write {path}: {cause}")


class BoundaryCheckError(InputError):
    """Coefficient functions violate the boundary hypotheses."""

    def __init__(self, failed: list[str]):
        self.failed = failed
        super().__init__(f"boundary checks failed: {', '.join(failed)}")


class ConstructionError(InputError):
    """A built-in family could not be constructed for the given parameters."""


class SingularFormulaError(InputError, ZeroDivisionError):
    """The closed-form approximation parameter is singular (alpha == beta)."""


class RangeError(NumericalError):
    """phi1 or phi2 left [0, 1] beyond the tolerance band."""

    def __init__(self, function: str, index: int, x: float, value: float):
        self.function = function
        self.index = index
        self.x = x
        self.value = value
        super().__init__(
            f"{function}(x) = {value!r} outside [0, 1] at node {index} (x = {x!r})"
        )


class CoefficientEvaluationError(NumericalError):
    """Evaluating a coefficient function failed."""

    def __init__(self, function: str, x: Any, cause: Exception):
        self.function = function
        self.x = x
        super().__init__(f"evaluating {function} failed near x = {x!r}: {cause}")


class EvaluationError(NumericalError):
    """An expression could not be evaluated at a point."""

    def __init__(self, message: str, x: Any):
        self.x = x
        super().__init__(f"{message} at x = {x!r}")


class ParseError(InputError):
    """Malformed expression text."""

    def __init__(self, offset: int, expected: str, found: str):
        self.offset = offset
        self.expected = expected
        self.found = found
        super().__init__(f"offset {offset}: expected {expected}, found {found}")


class DegenerateFitError(NumericalError):
    """A log-linear fit was requested on data containing zeros or too few points."""


class OptimizationError(NumericalError):
    """One-dimensional minimisation failed."""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        self.diagnostics = diagnostics or {}
        super().__init__(f"{message} {self.diagnostics}" if diagnostics else message)


class NumericalCheckError(NumericalError):
    """An analytic identity failed its numerical cross-check."""


class InvalidProbabilityError(NumericalError):
    """phi produced a value that is not a probability weight."""

    def __init__(self, x: float, value: float):
        self.x = x
        self.value = value
        super().__init__(f"phi({x!r}) = {value!r} is not in [0, 1]")


class ReliabilityError(NumericalError):
    """Too many Monte-Carlo paths timed out."""
