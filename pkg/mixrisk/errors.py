"""Exception hierarchy shared by every mixrisk module.

Every error is a ``ValueError`` so callers that only know the standard library
contract keep working; the ``category`` attribute is the machine-readable tag
and ``exit_code`` is what the command-line front end returns.
"""

from typing import Optional


class MixRiskError(ValueError):
    """Base class for all mixrisk errors."""

    category = "error"
    exit_code = 1


class ConfigurationError(MixRiskError):
    """Invalid parameters, settings or object invariants."""

    category = "configuration"
    exit_code = 2


class ScenarioParseError(MixRiskError):
    """A scenario document could not be turned into a scenario."""

    category = "parse"
    exit_code = 2

    def __init__(self, message: str, path: str = "") -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ScenarioSyntaxError(ScenarioParseError):
    """The document is not well-formed JSON."""

    category = "syntax"

    def __init__(self, message: str, line: int, column: int) -> None:
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ScenarioSchemaError(ScenarioParseError):
    """Unknown, missing or mistyped keys."""

    category = "schema"


class ScenarioSemanticError(ScenarioParseError):
    """Well-typed values that violate a model invariant."""

    category = "semantic"


class DomainError(MixRiskError):
    """An argument lies outside the domain of the operation."""

    category = "domain"
    exit_code = 3


class UnsupportedDerivativeError(MixRiskError):
    """A partial derivative of order above three was requested."""

    category = "unsupported"
    exit_code = 3


class SolverError(MixRiskError):
    """The saving problem could not be solved."""

    category = "solver"
    exit_code = 3


class NoInteriorOptimumError(SolverError):
    """The first-order condition has no sign change inside the admissible interval."""

    category = "no-interior-optimum"


class ModelAssumptionError(SolverError):
    """A standing assumption of the model (monotonicity, concavity) fails."""

    category = "model-assumption"


class NumericalError(MixRiskError):
    """A numerical procedure did not reach its tolerance."""

    category = "numerical"
    exit_code = 4

    def __init__(self, message: str, estimate: Optional[float] = None) -> None:
        self.estimate = estimate
        if estimate is not None:
            message = f"{message} (error estimate {estimate:.3e})"
        super().__init__(message)
