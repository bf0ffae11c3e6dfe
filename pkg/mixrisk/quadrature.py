"""Composite Gauss-Legendre quadrature with a doubling error estimate."""

import logging
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Tuple

import numpy as np
from scipy.special import roots_jacobi

from mixrisk.errors import ConfigurationError, NumericalError

logger = logging.getLogger(__name__)

DEFAULT_NODES = 64
QUAD_NODES_ENV = "MIXRISK_QUAD_NODES"


def default_node_count() -> int:
    """
    Return the default node count, honouring ``MIXRISK_QUAD_NODES``.

    Raises:
        ConfigurationError: If the environment variable is not an integer >= 2
    """
    raw = os.environ.get(QUAD_NODES_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_NODES
    try:
        nodes = int(raw)
    except ValueError:
        raise ConfigurationError(f"{QUAD_NODES_ENV} must be an integer, got {raw!r}")
    if nodes < 2:
        raise ConfigurationError(f"{QUAD_NODES_ENV} must be at least 2, got {nodes}")
    return nodes


@dataclass(frozen=True)
class QuadratureSettings:
    """Node count per panel and the accepted relative error estimate."""

    nodes: int = field(default_factory=default_node_count)
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if isinstance(self.nodes, bool) or not isinstance(self.nodes, int):
            raise TypeError(f"nodes must be an int, got {type(self.nodes).__name__}")
        if self.nodes < 2:
            raise ConfigurationError(f"quadrature needs at least 2 nodes, got {self.nodes}")
        if not self.tolerance > 0:
            raise ConfigurationError(
                f"quadrature tolerance must be positive, got {self.tolerance}"
            )


@dataclass(frozen=True, eq=False)
class Rule:
    """A discrete integration rule: sum(weights * g(points))."""

    points: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    nodes: int


@lru_cache(maxsize=32)
def _legendre(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    points, weights = np.polynomial.legendre.leggauss(nodes)
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


def composite_rule(a: float, b: float, nodes: int, breakpoints: Iterable[float] = ()) -> Rule:
    """
    Build a composite Gauss-Legendre rule on [a, b].

    One panel of ``nodes`` points is placed between consecutive breakpoints, so
    integrands that are only piecewise smooth are still integrated spectrally.

    Args:
        a: Lower limit
        b: Upper limit (a < b)
        nodes: Gauss-Legendre points per panel
        breakpoints: Interior points where the integrand may have kinks

    Returns:
        Rule on [a, b]
    """
    cuts = sorted({float(a), float(b), *(float(p) for p in breakpoints if a < p < b)})
    base_points, base_weights = _legendre(nodes)
    points = []
    weights = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        half = 0.5 * (hi - lo)
        points.append(lo + half * (base_points + 1.0))
        weights.append(half * base_weights)
    return Rule(np.concatenate(points), np.concatenate(weights))


@lru_cache(maxsize=32)
def _jacobi(nodes: int, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    points, weights = roots_jacobi(nodes, 0.0, beta)
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


def power_weighted_rule(nodes: int, exponent: float, breakpoints: Iterable[float] = ()) -> Rule:
    """
    Composite rule on [0, 1] whose weights include the density (n + 1) * gamma**n.

    The panel touching zero uses Gauss-Jacobi nodes for the factor gamma**n, so
    the rule stays spectrally accurate for non-integer exponents. The remaining
    panels are Gauss-Legendre with the density folded into the weights.

    Args:
        nodes: Points per panel
        exponent: Power n >= 0
        breakpoints: Interior levels where the integrand may have kinks
    """
    cuts = sorted({0.0, 1.0, *(float(p) for p in breakpoints if 0.0 < p < 1.0)})
    n = float(exponent)
    jacobi_points, jacobi_weights = _jacobi(nodes, n)
    first = cuts[1]
    points = [0.5 * first * (jacobi_points + 1.0)]
    weights = [(n + 1.0) * (0.5 * first) ** (n + 1.0) * jacobi_weights]
    base_points, base_weights = _legendre(nodes)
    for lo, hi in zip(cuts[1:-1], cuts[2:]):
        half = 0.5 * (hi - lo)
        panel = lo + half * (base_points + 1.0)
        points.append(panel)
        weights.append(half * base_weights * (n + 1.0) * np.power(panel, n))
    return Rule(np.concatenate(points), np.concatenate(weights))


def richardson(
    evaluate: Callable[[int], float], settings: QuadratureSettings, what: str = "integral"
) -> QuadratureResult:
    """
    Evaluate at ``nodes`` and ``2 * nodes`` and keep the finer value.

    Args:
        evaluate: Maps a node count to a quadrature value
        settings: Node count and tolerance
        what: Label used in log and error messages

    Returns:
        The refined value with the coarse/fine difference as error estimate

    Raises:
        NumericalError: If the estimate exceeds tolerance * max(1, |value|)
    """
    coarse = float(evaluate(settings.nodes))
    fine = float(evaluate(2 * settings.nodes))
    estimate = abs(fine - coarse)
    logger.debug("%s: value=%.15g estimate=%.3e", what, fine, estimate)
    if not np.isfinite(fine) or estimate > settings.tolerance * max(1.0, abs(fine)):
        raise NumericalError(f"{what} did not converge with {settings.nodes} nodes", estimate)
    return QuadratureResult(fine, estimate, 2 * settings.nodes)


def integrate(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    settings: QuadratureSettings,
    breakpoints: Iterable[float] = (),
) -> QuadratureResult:
    """
    Integrate a vectorized function over [a, b].

    Args:
        func: Callable accepting and returning numpy arrays
        a: Lower limit
        b: Upper limit
        settings: Quadrature settings
        breakpoints: Interior kink locations

    Returns:
        QuadratureResult
    """
    cuts = tuple(breakpoints)

    def evaluate(nodes: int) -> float:
        rule = composite_rule(a, b, nodes, cuts)
        return float(np.dot(rule.weights, func(rule.points)))

    return richardson(evaluate, settings)
