"""Mixed expected utility of a (fuzzy, random) pair of independent risks."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np

from mixrisk.base import FuzzyNumber, RandomVariable, WeightingFunction
from mixrisk.errors import ConfigurationError, DomainError
from mixrisk.quadrature import QuadratureSettings, Rule, richardson

logger = logging.getLogger(__name__)

BivariateFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]
Side = Union[FuzzyNumber, RandomVariable, float]


class Orientation(Enum):
    """Which slot of the mixed vector carries the fuzzy component."""

    AX = "AX"
    YB = "YB"


@dataclass(frozen=True)
class MixedVector:
    """
    A fuzzy and a random risk treated as independent.

    With ``Orientation.AX`` the fuzzy part is the first argument (income) and the
    random part the second (background); ``Orientation.YB`` swaps the roles.
    """

    orientation: Orientation
    fuzzy: FuzzyNumber
    random: RandomVariable

    def __post_init__(self) -> None:
        if not isinstance(self.orientation, Orientation):
            raise TypeError("orientation must be an Orientation")
        if not isinstance(self.fuzzy, FuzzyNumber):
            raise TypeError(f"fuzzy part must be a FuzzyNumber, got {type(self.fuzzy).__name__}")
        if not isinstance(self.random, RandomVariable):
            raise TypeError(
                f"random part must be a RandomVariable, got {type(self.random).__name__}"
            )


def _side_rule(side: Side, weighting: WeightingFunction, nodes: int) -> Rule:
    if isinstance(side, FuzzyNumber):
        return side.rule(weighting, nodes)
    if isinstance(side, RandomVariable):
        return side.rule(nodes)
    return Rule(np.array([float(side)]), np.array([1.0]))


def expected_value(
    weighting: WeightingFunction,
    g: BivariateFunction,
    income_side: Side,
    background_side: Side,
    settings: Optional[QuadratureSettings] = None,
    what: str = "mixed expectation",
) -> float:
    """
    Expectation of g(y, x) when each argument is fuzzy, random or a fixed number.

    The income side is the outer sum and the background side the inner one, so a
    fuzzy income side gives E(f, g(A, X)) and a random one gives M(g(Y, .)).

    Args:
        weighting: Weighting function used by any fuzzy side
        g: Vectorized bivariate function
        income_side: Risk (or value) in the first argument
        background_side: Risk (or value) in the second argument
        settings: Quadrature settings
        what: Label for log and error messages

    Raises:
        ConfigurationError: If both sides are fuzzy
        DomainError: If g is undefined at a quadrature point
        NumericalError: If the error estimate exceeds tolerance
    """
    if isinstance(income_side, FuzzyNumber) and isinstance(background_side, FuzzyNumber):
        raise ConfigurationError("both risks fuzzy is not a mixed vector")
    settings = settings or QuadratureSettings()

    def evaluate(nodes: int) -> float:
        outer = _side_rule(income_side, weighting, nodes)
        inner = _side_rule(background_side, weighting, nodes)
        y, x = np.meshgrid(outer.points, inner.points, indexing="ij")
        values = np.asarray(g(y, x), dtype=float)
        finite = np.isfinite(values)
        if not np.all(finite):
            i, j = np.argwhere(~finite)[0]
            raise DomainError(
                f"{what} is undefined at (y={y[i, j]:.6g}, x={x[i, j]:.6g})"
            )
        return float(outer.weights @ (values @ inner.weights))

    return richardson(evaluate, settings, what).value


def mixed_expected_utility(
    weighting: WeightingFunction,
    utility: BivariateFunction,
    vector: MixedVector,
    settings: Optional[QuadratureSettings] = None,
) -> float:
    """
    Compute E(f, u(A, X)) = 1/2 * int [M(u(a1, X)) + M(u(a2, X))] f dgamma.

    Raises:
        ConfigurationError: If the vector is not AX-oriented
        DomainError: If u is undefined at an evaluation point
        NumericalError: If the error estimate exceeds tolerance
    """
    if vector.orientation is not Orientation.AX:
        raise ConfigurationError("mixed_expected_utility expects an (A, X) vector")
    return expected_value(
        weighting, utility, vector.fuzzy, vector.random, settings, "mixed expected utility"
    )


def mixed_expected_utility_dual(
    weighting: WeightingFunction,
    utility: BivariateFunction,
    vector: MixedVector,
    settings: Optional[QuadratureSettings] = None,
) -> float:
    """E(f, u(Y, B)), evaluated as E(f, u~(B, Y)) with u~(x, y) = u(y, x)."""
    if vector.orientation is not Orientation.YB:
        raise ConfigurationError("mixed_expected_utility_dual expects a (Y, B) vector")
    transposed = MixedVector(Orientation.AX, vector.fuzzy, vector.random)
    return mixed_expected_utility(
        weighting, lambda b, y: utility(y, b), transposed, settings
    )
