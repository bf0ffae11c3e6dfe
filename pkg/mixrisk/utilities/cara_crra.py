"""Exponential-in-income, power-in-background product utility."""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from mixrisk.base import ArrayLike, BiUtility, DomainBox
from mixrisk.errors import ConfigurationError


@dataclass(frozen=True)
class CaraCrraProductUtility(BiUtility):
    """
    v(y, x) = -(1/alpha) * exp(-alpha y) * x**(1 - gamma) / (1 - gamma).

    Every partial factorizes as c_j exp(-alpha y) P_k(x) with j derivatives in y
    and k in x, where c_j = -(1/alpha) (-alpha)**j. For gamma < 1 the function is
    increasing in y but decreasing in x, so the background argument is a "bad".
    """

    family = "cara_crra_product"

    alpha: float
    gamma: float
    domain: Optional[DomainBox] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ConfigurationError(f"alpha must be positive, got {self.alpha}")
        if not self.gamma > 0 or self.gamma == 1:
            raise ConfigurationError(
                f"gamma must be positive and different from 1, got {self.gamma}"
            )
        if self.domain is None:
            object.__setattr__(self, "domain", DomainBox(-10.0, 10.0, 0.01, 10.0))
        if self.domain.x_min <= 0:
            raise ConfigurationError("cara_crra_product needs x_min > 0")

    def _y_factor(self, order: int, y: ArrayLike) -> ArrayLike:
        return -(1.0 / self.alpha) * (-self.alpha) ** order * np.exp(-self.alpha * np.asarray(y))

    def _x_factor(self, order: int, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        g = self.gamma
        if order == 0:
            return x ** (1.0 - g) / (1.0 - g)
        if order == 1:
            return x ** (-g)
        if order == 2:
            return -g * x ** (-g - 1.0)
        return g * (g + 1.0) * x ** (-g - 2.0)

    def _value(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        return self._y_factor(0, y) * self._x_factor(0, x)

    def _partial(self, key: Tuple[int, ...], y: ArrayLike, x: ArrayLike) -> ArrayLike:
        return self._y_factor(key.count(1), y) * self._x_factor(key.count(2), x)

    def parameters(self) -> Dict[str, float]:
        return {"alpha": self.alpha, "gamma": self.gamma}
