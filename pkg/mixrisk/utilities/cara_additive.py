"""Separable exponential utility v(y, x) = -exp(-alpha y) - exp(-beta x)."""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from mixrisk.base import ArrayLike, BiUtility, DomainBox
from mixrisk.errors import ConfigurationError


@dataclass(frozen=True)
class CaraAdditiveUtility(BiUtility):
    """Constant absolute risk aversion alpha in income and beta in background."""

    family = "cara_additive"

    alpha: float
    beta: float
    domain: Optional[DomainBox] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0):
            raise ConfigurationError(
                f"alpha and beta must be positive, got alpha={self.alpha}, beta={self.beta}"
            )
        if self.domain is None:
            object.__setattr__(self, "domain", DomainBox(-20.0, 20.0, -20.0, 20.0))

    @staticmethod
    def _exp_derivative(rate: float, order: int, z: ArrayLike) -> ArrayLike:
        return -((-rate) ** order) * np.exp(-rate * np.asarray(z, dtype=float))

    def _value(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        return self._exp_derivative(self.alpha, 0, y) + self._exp_derivative(self.beta, 0, x)

    def _partial(self, key: Tuple[int, ...], y: ArrayLike, x: ArrayLike) -> ArrayLike:
        order_y, order_x = key.count(1), key.count(2)
        if order_y and order_x:
            return np.zeros(np.broadcast(np.asarray(y), np.asarray(x)).shape)[()]
        if order_y:
            return self._exp_derivative(self.alpha, order_y, y) + 0.0 * np.asarray(x, dtype=float)
        return self._exp_derivative(self.beta, order_x, x) + 0.0 * np.asarray(y, dtype=float)

    def parameters(self) -> Dict[str, float]:
        return {"alpha": self.alpha, "beta": self.beta}
