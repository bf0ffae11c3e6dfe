"""Fuzzy numbers, weighting functions and f-weighted possibilistic indicators."""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from mixrisk.base import FuzzyNumber, WeightingFunction
from mixrisk.errors import ConfigurationError
from mixrisk.quadrature import QuadratureSettings, integrate, richardson

WEIGHT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class PowerWeighting(WeightingFunction):
    """f(gamma) = (n + 1) * gamma**n; n = 1 gives the classical f(gamma) = 2 gamma."""

    exponent: float = 1.0

    def __post_init__(self) -> None:
        if not (np.isfinite(self.exponent) and self.exponent >= 0):
            raise ConfigurationError(f"weighting exponent must be >= 0, got {self.exponent}")

    def __call__(self, gammas: np.ndarray) -> np.ndarray:
        gammas = np.asarray(gammas, dtype=float)
        return (self.exponent + 1.0) * np.power(gammas, self.exponent)

    def power_exponent(self) -> Optional[float]:
        return self.exponent


@dataclass(frozen=True)
class TabulatedWeighting(WeightingFunction):
    """Piecewise-linear density through (gammas[i], densities[i])."""

    gammas: Tuple[float, ...]
    densities: Tuple[float, ...]

    def __post_init__(self) -> None:
        g = np.asarray(self.gammas, dtype=float)
        f = np.asarray(self.densities, dtype=float)
        if g.ndim != 1 or g.shape != f.shape or g.size < 2:
            raise ConfigurationError("weighting table needs matching gammas and densities")
        if g[0] != 0.0 or g[-1] != 1.0 or np.any(np.diff(g) <= 0):
            raise ConfigurationError("weighting gammas must increase strictly from 0 to 1")
        if np.any(f < 0) or np.any(np.diff(f) < 0):
            raise ConfigurationError("weighting density must be non-negative and non-decreasing")
        total = integrate(self, 0.0, 1.0, QuadratureSettings(nodes=4), self.breakpoints()).value
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            raise ConfigurationError(f"weighting density integrates to {total!r}, not 1")

    def __call__(self, gammas: np.ndarray) -> np.ndarray:
        return np.interp(gammas, self.gammas, self.densities)

    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(self.gammas[1:-1])


def _power_moments(
    low: float, high: float, left: float, right: float, n: float
) -> Tuple[float, float]:
    # Level sets [low - t*left, high + t*right] with t = 1 - gamma, f = (n+1) gamma^n.
    m1 = 1.0 / (n + 2.0)
    m2 = 2.0 / ((n + 2.0) * (n + 3.0))
    half = 0.5 * (high - low)
    delta = 0.5 * (right - left) * m1
    mean = 0.5 * (low + high) + delta
    variance = 0.5 * (
        (half + delta) ** 2
        + (half - delta) ** 2
        + 2.0 * (half + delta) * left * m1
        + 2.0 * (half - delta) * right * m1
        + (left**2 + right**2) * m2
    )
    return mean, variance


@dataclass(frozen=True)
class RectangularFuzzyNumber(FuzzyNumber):
    """Constant level sets [c, d] for every gamma."""

    c: float
    d: float

    def __post_init__(self) -> None:
        if not self.c <= self.d:
            raise ConfigurationError(
                f"rectangular fuzzy number needs c <= d, got [{self.c}, {self.d}]"
            )
        self._check_level_sets()

    def endpoints(self, gammas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        gammas = np.asarray(gammas, dtype=float)
        return np.full_like(gammas, self.c), np.full_like(gammas, self.d)

    def moments(self, weighting: WeightingFunction) -> Optional[Tuple[float, float]]:
        return 0.5 * (self.c + self.d), 0.25 * (self.d - self.c) ** 2


@dataclass(frozen=True)
class TrapezoidalFuzzyNumber(FuzzyNumber):
    """Core [core_low, core_high] with linear sides of the given widths."""

    core_low: float
    core_high: float
    left: float
    right: float

    def __post_init__(self) -> None:
        if not self.core_low <= self.core_high:
            raise ConfigurationError("trapezoidal fuzzy number needs core_low <= core_high")
        if self.left < 0 or self.right < 0:
            raise ConfigurationError("fuzzy number widths must be non-negative")
        self._check_level_sets()

    def endpoints(self, gammas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        spread = 1.0 - np.asarray(gammas, dtype=float)
        return self.core_low - spread * self.left, self.core_high + spread * self.right

    def moments(self, weighting: WeightingFunction) -> Optional[Tuple[float, float]]:
        n = weighting.power_exponent()
        if n is None:
            return None
        return _power_moments(self.core_low, self.core_high, self.left, self.right, n)


@dataclass(frozen=True)
class TriangularFuzzyNumber(FuzzyNumber):
    """Peak at ``center`` with left and right widths."""

    center: float
    left: float
    right: float

    def __post_init__(self) -> None:
        if self.left < 0 or self.right < 0:
            raise ConfigurationError("fuzzy number widths must be non-negative")
        self._check_level_sets()

    def endpoints(self, gammas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        spread = 1.0 - np.asarray(gammas, dtype=float)
        return self.center - spread * self.left, self.center + spread * self.right

    def moments(self, weighting: WeightingFunction) -> Optional[Tuple[float, float]]:
        n = weighting.power_exponent()
        if n is None:
            return None
        return _power_moments(self.center, self.center, self.left, self.right, n)


@dataclass(frozen=True)
class ConstantFuzzyNumber(FuzzyNumber):
    """The crisp number ``value`` seen as a degenerate fuzzy number."""

    value: float

    def __post_init__(self) -> None:
        self._check_level_sets()

    def endpoints(self, gammas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        gammas = np.asarray(gammas, dtype=float)
        return np.full_like(gammas, self.value), np.full_like(gammas, self.value)

    def moments(self, weighting: WeightingFunction) -> Optional[Tuple[float, float]]:
        return float(self.value), 0.0


@dataclass(frozen=True)
class SampledFuzzyNumber(FuzzyNumber):
    """Endpoint functions tabulated on a gamma grid, interpolated linearly."""

    gammas: Tuple[float, ...]
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self) -> None:
        g = np.asarray(self.gammas, dtype=float)
        if g.ndim != 1 or g.size < 2 or not (len(self.lower) == len(self.upper) == g.size):
            raise ConfigurationError("sampled fuzzy number needs equal-length gamma/lower/upper")
        if g[0] != 0.0 or g[-1] != 1.0 or np.any(np.diff(g) <= 0):
            raise ConfigurationError("sampled gammas must increase strictly from 0 to 1")
        self._check_level_sets()

    def endpoints(self, gammas: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        gammas = np.asarray(gammas, dtype=float)
        return (
            np.interp(gammas, self.gammas, self.lower),
            np.interp(gammas, self.gammas, self.upper),
        )

    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(self.gammas[1:-1])


def level_set(fuzzy: FuzzyNumber, gamma: float) -> Tuple[float, float]:
    """Return [a1(gamma), a2(gamma)]; gamma = 0 gives the closure of the support."""
    return fuzzy.level_set(gamma)


def membership(fuzzy: FuzzyNumber, x: float) -> float:
    """Membership degree of ``x`` in ``fuzzy``."""
    return fuzzy.membership(x)


def possibilistic_expected_utility(
    weighting: WeightingFunction,
    utility: Callable[[np.ndarray], np.ndarray],
    fuzzy: FuzzyNumber,
    settings: Optional[QuadratureSettings] = None,
) -> float:
    """
    Compute E(f, u(A)) = 1/2 * int_0^1 [u(a1) + u(a2)] f(gamma) dgamma.

    Args:
        weighting: Weighting function f
        utility: Vectorized scalar utility u
        fuzzy: Fuzzy number A
        settings: Quadrature settings (defaults honour MIXRISK_QUAD_NODES)

    Returns:
        The possibilistic expected utility

    Raises:
        TypeError: If the arguments have the wrong types
        NumericalError: If the quadrature error estimate exceeds tolerance
    """
    if not isinstance(weighting, WeightingFunction):
        raise TypeError(f"weighting must be a WeightingFunction, got {type(weighting).__name__}")
    if not isinstance(fuzzy, FuzzyNumber):
        raise TypeError(f"fuzzy must be a FuzzyNumber, got {type(fuzzy).__name__}")
    settings = settings or QuadratureSettings()

    def evaluate(nodes: int) -> float:
        rule = fuzzy.rule(weighting, nodes)
        return float(np.dot(rule.weights, utility(rule.points)))

    return richardson(evaluate, settings, "possibilistic expected utility").value


def possibilistic_mean(
    weighting: WeightingFunction,
    fuzzy: FuzzyNumber,
    settings: Optional[QuadratureSettings] = None,
) -> float:
    """f-weighted possibilistic mean E(f, A); closed form when the shape allows it."""
    closed = fuzzy.moments(weighting)
    if closed is not None:
        return closed[0]
    return possibilistic_expected_utility(weighting, lambda a: a, fuzzy, settings)


def possibilistic_variance(
    weighting: WeightingFunction,
    fuzzy: FuzzyNumber,
    settings: Optional[QuadratureSettings] = None,
) -> float:
    """f-weighted possibilistic variance Var(f, A); always non-negative."""
    closed = fuzzy.moments(weighting)
    if closed is not None:
        return max(closed[1], 0.0)
    mean = possibilistic_mean(weighting, fuzzy, settings)
    variance = possibilistic_expected_utility(
        weighting, lambda a: (a - mean) ** 2, fuzzy, settings
    )
    return max(variance, 0.0)
