"""Bounded random variables: uniform, finite discrete and degenerate."""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from mixrisk.base import RandomVariable
from mixrisk.errors import ConfigurationError
from mixrisk.quadrature import QuadratureSettings, Rule, composite_rule

PROBABILITY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class UniformRandomVariable(RandomVariable):
    """Uniform distribution on [c, d] with c < d."""

    c: float
    d: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.c) and np.isfinite(self.d) and self.c < self.d):
            raise ConfigurationError(f"uniform distribution needs c < d, got [{self.c}, {self.d}]")

    def mean(self) -> float:
        return 0.5 * (self.c + self.d)

    def variance(self) -> float:
        return (self.d - self.c) ** 2 / 12.0

    def support(self) -> Tuple[float, float]:
        return float(self.c), float(self.d)

    def rule(self, nodes: int) -> Rule:
        base = composite_rule(self.c, self.d, nodes)
        return Rule(base.points, base.weights / (self.d - self.c))

    def affine(self, scale: float, shift: float) -> RandomVariable:
        if scale == 0:
            return DegenerateRandomVariable(shift)
        lo, hi = sorted((scale * self.c + shift, scale * self.d + shift))
        return UniformRandomVariable(lo, hi)


@dataclass(frozen=True)
class DiscreteRandomVariable(RandomVariable):
    """Finitely many support points with probabilities summing to one."""

    points: Tuple[float, ...]
    probabilities: Tuple[float, ...]

    def __post_init__(self) -> None:
        x = np.asarray(self.points, dtype=float)
        p = np.asarray(self.probabilities, dtype=float)
        if x.ndim != 1 or x.size == 0 or x.shape != p.shape:
            raise ConfigurationError(
                "discrete distribution needs matching points and probabilities"
            )
        if not np.all(np.isfinite(x)):
            raise ConfigurationError("discrete support points must be finite")
        if np.any(p < 0):
            raise ConfigurationError("probabilities must be non-negative")
        if abs(p.sum() - 1.0) > PROBABILITY_TOLERANCE:
            raise ConfigurationError(f"probabilities sum to {p.sum()!r}, not 1")

    def mean(self) -> float:
        return float(np.dot(self.probabilities, self.points))

    def variance(self) -> float:
        x = np.asarray(self.points, dtype=float)
        return max(float(np.dot(self.probabilities, (x - self.mean()) ** 2)), 0.0)

    def support(self) -> Tuple[float, float]:
        x = [p for p, w in zip(self.points, self.probabilities) if w > 0]
        return float(min(x)), float(max(x))

    def rule(self, nodes: int) -> Rule:
        points = np.asarray(self.points, dtype=float)
        return Rule(points, np.asarray(self.probabilities, dtype=float))

    def affine(self, scale: float, shift: float) -> RandomVariable:
        return DiscreteRandomVariable(
            tuple(scale * p + shift for p in self.points), tuple(self.probabilities)
        )


@dataclass(frozen=True)
class DegenerateRandomVariable(RandomVariable):
    """The constant ``value`` with probability one."""

    value: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.value):
            raise ConfigurationError(f"degenerate value must be finite, got {self.value}")

    def mean(self) -> float:
        return float(self.value)

    def variance(self) -> float:
        return 0.0

    def support(self) -> Tuple[float, float]:
        return float(self.value), float(self.value)

    def rule(self, nodes: int) -> Rule:
        return Rule(np.array([float(self.value)]), np.array([1.0]))

    def affine(self, scale: float, shift: float) -> RandomVariable:
        return DegenerateRandomVariable(scale * self.value + shift)


def prob_mean(variable: RandomVariable) -> float:
    """Expected value M(X), in closed form."""
    return variable.mean()


def prob_variance(variable: RandomVariable) -> float:
    """Variance Var(X), in closed form."""
    return variable.variance()


def prob_expect(
    g: Callable[[np.ndarray], np.ndarray],
    variable: RandomVariable,
    settings: Optional[QuadratureSettings] = None,
) -> float:
    """
    Compute M(g(X)).

    Discrete and degenerate variables are summed exactly; the uniform variant
    uses Gauss-Legendre quadrature with a doubling error estimate.

    Raises:
        TypeError: If ``variable`` is not a RandomVariable
        NumericalError: If the quadrature error estimate exceeds tolerance
    """
    if not isinstance(variable, RandomVariable):
        raise TypeError(f"variable must be a RandomVariable, got {type(variable).__name__}")
    if isinstance(variable, (DiscreteRandomVariable, DegenerateRandomVariable)):
        rule = variable.rule(0)
        return float(np.dot(rule.weights, g(rule.points)))
    return variable.expect(g, settings)
