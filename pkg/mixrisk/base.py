"""Base classes and interfaces for risks, weighting functions and utilities."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, ClassVar, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from mixrisk.errors import ConfigurationError, DomainError, UnsupportedDerivativeError
from mixrisk.quadrature import (
    QuadratureSettings,
    Rule,
    composite_rule,
    power_weighted_rule,
    richardson,
)

ArrayLike = Union[float, np.ndarray]
NESTING_GRID = np.linspace(0.0, 1.0, 101)
_NESTING_SLACK = 1e-12


class WeightingFunction(ABC):
    """A non-negative, non-decreasing density on [0, 1] integrating to one."""

    @abstractmethod
    def __call__(self, gammas: np.ndarray) -> np.ndarray:
        """Evaluate the density at the given levels."""

    def breakpoints(self) -> Tuple[float, ...]:
        """Interior levels where the density may have kinks."""
        return ()

    def power_exponent(self) -> Optional[float]:
        """Exponent n when the density is (n + 1) * gamma**n, otherwise None."""
        return None


class FuzzyNumber(ABC):
    """
    A fuzzy number represented by its level sets [a1(gamma), a2(gamma)].

    Subclasses only provide the endpoint functions; everything else (level sets,
    membership, integration rules, shifting and scaling) is derived from them.
    """

    @abstractmethod
    def endpoints(self, gammas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Evaluate the level-set endpoints.

        Args:
            gammas: Levels in [0, 1]

        Returns:
            Tuple (a1, a2) of arrays shaped like ``gammas``
        """

    def breakpoints(self) -> Tuple[float, ...]:
        """Interior levels where the endpoint functions may have kinks."""
        return ()

    def moments(self, weighting: WeightingFunction) -> Optional[Tuple[float, float]]:
        """Closed-form (mean, variance) under ``weighting``, or None if unavailable."""
        return None

    def level_set(self, gamma: float) -> Tuple[float, float]:
        """
        Return the gamma-level set [a1(gamma), a2(gamma)].

        Raises:
            DomainError: If gamma is outside [0, 1]
        """
        if not 0.0 <= gamma <= 1.0:
            raise DomainError(f"level must lie in [0, 1], got {gamma}")
        a1, a2 = self.endpoints(np.array([float(gamma)]))
        return float(a1[0]), float(a2[0])

    def support(self) -> Tuple[float, float]:
        """Closure of the support, i.e. the 0-level set."""
        return self.level_set(0.0)

    def core(self) -> Tuple[float, float]:
        """The 1-level set."""
        return self.level_set(1.0)

    def membership(self, x: float, iterations: int = 60) -> float:
        """
        Membership degree of ``x``: the largest level whose level set contains it.

        Points on the boundary of the support have membership 0, matching the
        closure convention of the 0-level set.
        """
        lo, hi = self.support()
        if not lo <= x <= hi:
            return 0.0
        core_lo, core_hi = self.core()
        if core_lo <= x <= core_hi:
            return 1.0
        inside, outside = 0.0, 1.0
        for _ in range(iterations):
            mid = 0.5 * (inside + outside)
            a1, a2 = self.level_set(mid)
            if a1 <= x <= a2:
                inside = mid
            else:
                outside = mid
        return inside

    def rule(self, weighting: WeightingFunction, nodes: int) -> Rule:
        """
        Discretize the possibilistic expectation operator.

        The returned rule puts weight f(gamma_k) w_k / 2 on both endpoints of
        every level set, so sum(weights * u(points)) is E(f, u(A)).
        """
        cuts = self.breakpoints() + weighting.breakpoints()
        exponent = weighting.power_exponent()
        if exponent is not None:
            gamma_rule = power_weighted_rule(nodes, exponent, cuts)
            density = gamma_rule.weights
        else:
            gamma_rule = composite_rule(0.0, 1.0, nodes, cuts)
            density = gamma_rule.weights * weighting(gamma_rule.points)
        a1, a2 = self.endpoints(gamma_rule.points)
        half = 0.5 * density
        return Rule(np.concatenate([a1, a2]), np.concatenate([half, half]))

    def scaled_about(self, center: float, factor: float) -> "FuzzyNumber":
        """Return factor * (A - center) + center."""
        return AffineFuzzyNumber(self, float(factor), float(center) * (1.0 - factor))

    def _check_level_sets(self) -> None:
        a1, a2 = self.endpoints(NESTING_GRID)
        if not (np.all(np.isfinite(a1)) and np.all(np.isfinite(a2))):
            raise ConfigurationError("fuzzy number must have bounded support")
        if np.any(a1 > a2 + _NESTING_SLACK):
            raise ConfigurationError("fuzzy number has an empty level set (a1 > a2)")
        if np.any(np.diff(a1) < -_NESTING_SLACK) or np.any(np.diff(a2) > _NESTING_SLACK):
            raise ConfigurationError("fuzzy number level sets are not nested")

    def __add__(self, shift: float) -> "FuzzyNumber":
        if not isinstance(shift, (int, float)):
            return NotImplemented
        return AffineFuzzyNumber(self, 1.0, float(shift))

    __radd__ = __add__

    def __sub__(self, shift: float) -> "FuzzyNumber":
        if not isinstance(shift, (int, float)):
            return NotImplemented
        return AffineFuzzyNumber(self, 1.0, -float(shift))

    def __mul__(self, factor: float) -> "FuzzyNumber":
        if not isinstance(factor, (int, float)):
            return NotImplemented
        return AffineFuzzyNumber(self, float(factor), 0.0)

    __rmul__ = __mul__


@dataclass(frozen=True)
class AffineFuzzyNumber(FuzzyNumber):
    """scale * base + shift, computed on level-set endpoints."""

    base: FuzzyNumber
    scale: float
    shift: float

    def endpoints(self, gammas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        a1, a2 = self.base.endpoints(gammas)
        lower = self.scale * a1 + self.shift
        upper = self.scale * a2 + self.shift
        if self.scale < 0:
            return upper, lower
        return lower, upper

    def breakpoints(self) -> Tuple[float, ...]:
        return self.base.breakpoints()

    def moments(self, weighting: WeightingFunction) -> Optional[Tuple[float, float]]:
        inner = self.base.moments(weighting)
        if inner is None:
            return None
        mean, variance = inner
        return self.scale * mean + self.shift, self.scale**2 * variance


class RandomVariable(ABC):
    """A bounded random variable exposed through exact moments and an integration rule."""

    @abstractmethod
    def mean(self) -> float:
        """Expected value M(X)."""

    @abstractmethod
    def variance(self) -> float:
        """Variance Var(X)."""

    @abstractmethod
    def support(self) -> Tuple[float, float]:
        """Smallest closed interval carrying all probability mass."""

    @abstractmethod
    def rule(self, nodes: int) -> Rule:
        """Rule whose weights are probabilities (they sum to one)."""

    @abstractmethod
    def affine(self, scale: float, shift: float) -> "RandomVariable":
        """Distribution of scale * X + shift."""

    def scaled_about(self, center: float, factor: float) -> "RandomVariable":
        """Return factor * (X - center) + center."""
        return self.affine(float(factor), float(center) * (1.0 - factor))

    def expect(
        self, g: Callable[[np.ndarray], np.ndarray], settings: Optional[QuadratureSettings] = None
    ) -> float:
        """
        Compute M(g(X)).

        Raises:
            NumericalError: If the quadrature error estimate exceeds tolerance
        """
        settings = settings or QuadratureSettings()

        def evaluate(nodes: int) -> float:
            rule = self.rule(nodes)
            return float(np.dot(rule.weights, g(rule.points)))

        return richardson(evaluate, settings, "probabilistic expectation").value


@dataclass(frozen=True)
class DomainBox:
    """Closed rectangle y_min <= y <= y_max, x_min <= x <= x_max."""

    y_min: float
    y_max: float
    x_min: float
    x_max: float

    def __post_init__(self) -> None:
        if not (self.y_min < self.y_max and self.x_min < self.x_max):
            raise ConfigurationError(
                f"empty domain box: y in [{self.y_min}, {self.y_max}], "
                f"x in [{self.x_min}, {self.x_max}]"
            )

    @property
    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite([self.y_min, self.y_max, self.x_min, self.x_max])))

    def contains(self, y: ArrayLike, x: ArrayLike) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        x = np.asarray(x, dtype=float)
        return (self.y_min <= y) & (y <= self.y_max) & (self.x_min <= x) & (x <= self.x_max)

    def require(self, y: ArrayLike, x: ArrayLike) -> None:
        """
        Raise if any point lies outside the box.

        Raises:
            DomainError: Naming the first offending point
        """
        inside = self.contains(y, x)
        if np.all(inside):
            return
        y_b, x_b, inside_b = np.broadcast_arrays(
            np.asarray(y, dtype=float), np.asarray(x, dtype=float), inside
        )
        idx = np.argwhere(~inside_b)[0]
        point = (float(y_b[tuple(idx)]), float(x_b[tuple(idx)]))
        raise DomainError(
            f"point (y={point[0]:.6g}, x={point[1]:.6g}) is outside the utility domain "
            f"y in [{self.y_min:g}, {self.y_max:g}], x in [{self.x_min:g}, {self.x_max:g}]"
        )


def normalize_index(index: Sequence[int]) -> Tuple[int, ...]:
    """
    Validate a partial-derivative multi-index and sort it (partials commute).

    Raises:
        UnsupportedDerivativeError: If the order exceeds three
        ConfigurationError: If the index is empty or refers to other arguments
    """
    key = tuple(int(i) for i in index)
    if len(key) > 3:
        raise UnsupportedDerivativeError(
            f"partial derivatives up to order 3 are supported, got order {len(key)}"
        )
    if not key or any(i not in (1, 2) for i in key):
        raise ConfigurationError(f"derivative index must use arguments 1 and 2, got {index!r}")
    return tuple(sorted(key))


# (offset, coefficient) pairs for central k-th derivatives, divided by h**k
_STENCILS: Dict[int, Tuple[Tuple[int, float], ...]] = {
    0: ((0, 1.0),),
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
}


def fd_step(coordinate: float, order: int = 1) -> float:
    """Central-difference step: max(1e-5, 1e-5 |c|), widened 10x per extra order."""
    return max(1e-5, 1e-5 * abs(coordinate)) * 10.0 ** (order - 1)


def central_difference(
    func: Callable[[float, float], float],
    key: Tuple[int, ...],
    y: float,
    x: float,
    widen: bool = True,
) -> float:
    """
    Tensor-product central difference of ``func`` for the sorted index ``key``.

    Args:
        func: Scalar bivariate function
        key: Sorted multi-index, e.g. (1, 2, 2)
        y: First coordinate
        x: Second coordinate
        widen: Widen the step with the total order (nested stencils)
    """
    order_y = key.count(1)
    order_x = key.count(2)
    order = len(key) if widen else 1
    h_y = fd_step(y, order)
    h_x = fd_step(x, order)
    total = 0.0
    for j_y, c_y in _STENCILS[order_y]:
        for j_x, c_x in _STENCILS[order_x]:
            total += c_y * c_x * func(y + j_y * h_y, x + j_x * h_x)
    return total / (h_y**order_y * h_x**order_x)


class BiUtility(ABC):
    """
    Bivariate utility v(y, x) with partial derivatives through third order.

    Concrete families declare a ``domain`` field and implement ``_value``;
    families with closed-form derivatives override ``_partial``.
    """

    family: ClassVar[str] = ""
    analytic: ClassVar[bool] = True
    domain: DomainBox

    def __call__(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        self.domain.require(y, x)
        return self._value(y, x)

    def partial(self, index: Sequence[int], y: ArrayLike, x: ArrayLike) -> ArrayLike:
        """
        Evaluate a partial derivative, e.g. ``partial((1, 2, 2), y, x)`` for v_122.

        Raises:
            DomainError: If the point is outside the domain box
            UnsupportedDerivativeError: If the order exceeds three
        """
        key = normalize_index(index)
        self.domain.require(y, x)
        return self._partial(key, y, x)

    @abstractmethod
    def _value(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        """Evaluate without domain checks."""

    def _partial(self, key: Tuple[int, ...], y: ArrayLike, x: ArrayLike) -> ArrayLike:
        func = lambda a, b: float(self._value(a, b))  # noqa: E731
        values = np.vectorize(lambda a, b: central_difference(func, key, a, b))(y, x)
        return float(values) if np.ndim(values) == 0 else values

    @abstractmethod
    def parameters(self) -> Dict[str, float]:
        """Family parameters, as written to scenario files."""

    def scaled(self, factor: float) -> "BiUtility":
        """Return factor * v for factor > 0."""
        return ScaledUtility(self, float(factor))

    def __rmul__(self, factor: float) -> "BiUtility":
        if not isinstance(factor, (int, float)):
            return NotImplemented
        return self.scaled(factor)


@dataclass(frozen=True)
class ScaledUtility(BiUtility):
    """A positive multiple of another utility; derivative signs are unchanged."""

    base: BiUtility
    factor: float

    def __post_init__(self) -> None:
        if not self.factor > 0:
            raise ConfigurationError(f"utility scale must be positive, got {self.factor}")

    @property
    def domain(self) -> DomainBox:  # type: ignore[override]
        return self.base.domain

    @property
    def family(self) -> str:  # type: ignore[override]
        return self.base.family

    @property
    def analytic(self) -> bool:  # type: ignore[override]
        return self.base.analytic

    def _value(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        return self.factor * self.base._value(y, x)

    def _partial(self, key: Tuple[int, ...], y: ArrayLike, x: ArrayLike) -> ArrayLike:
        return self.factor * self.base._partial(key, y, x)

    def parameters(self) -> Dict[str, float]:
        return self.base.parameters()
