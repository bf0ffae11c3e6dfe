"""Separable logarithmic utility v(y, x) = ln y + ln x."""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from mixrisk.base import ArrayLike, BiUtility, DomainBox
from mixrisk.errors import ConfigurationError


def _log_derivative(order: int, z: ArrayLike) -> ArrayLike:
    # d^k/dz^k ln z = (-1)^(k-1) (k-1)! z^-k
    z = np.asarray(z, dtype=float)
    if order == 0:
        return np.log(z)
    return (-1.0) ** (order - 1) * math.factorial(order - 1) * z ** (-float(order))


@dataclass(frozen=True)
class LogAdditiveUtility(BiUtility):
    """Both arguments must stay strictly positive."""

    family = "log_additive"

    domain: Optional[DomainBox] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.domain is None:
            object.__setattr__(self, "domain", DomainBox(0.01, 100.0, 0.01, 100.0))
        if self.domain.y_min <= 0 or self.domain.x_min <= 0:
            raise ConfigurationError("log_additive needs y_min > 0 and x_min > 0")

    def _value(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        return np.log(np.asarray(y, dtype=float)) + np.log(np.asarray(x, dtype=float))

    def _partial(self, key: Tuple[int, ...], y: ArrayLike, x: ArrayLike) -> ArrayLike:
        order_y, order_x = key.count(1), key.count(2)
        if order_y and order_x:
            return np.zeros(np.broadcast(np.asarray(y), np.asarray(x)).shape)[()]
        if order_y:
            return _log_derivative(order_y, y) + 0.0 * np.asarray(x, dtype=float)
        return _log_derivative(order_x, x) + 0.0 * np.asarray(y, dtype=float)

    def parameters(self) -> Dict[str, float]:
        return {}
