"""Quadratic utility; all third-order partials vanish."""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from mixrisk.base import ArrayLike, BiUtility, DomainBox
from mixrisk.errors import ConfigurationError

_UNBOUNDED_LIMIT = 100.0


def _increasing_limit(q: float) -> float:
    return 0.999 * 0.5 / q if q > 0 else _UNBOUNDED_LIMIT


@dataclass(frozen=True)
class QuadraticUtility(BiUtility):
    """
    v(y, x) = y - q_y y**2 + x - q_x x**2.

    Only the increasing region y < 1 / (2 q_y), x < 1 / (2 q_x) is meaningful;
    the default domain box stops just short of it.
    """

    family = "quadratic"

    q_y: float
    q_x: float
    domain: Optional[DomainBox] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.q_y < 0 or self.q_x < 0:
            raise ConfigurationError("quadratic coefficients must be non-negative")
        if self.domain is None:
            box = DomainBox(0.0, _increasing_limit(self.q_y), 0.0, _increasing_limit(self.q_x))
            object.__setattr__(self, "domain", box)

    def _value(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        y = np.asarray(y, dtype=float)
        x = np.asarray(x, dtype=float)
        return y - self.q_y * y**2 + x - self.q_x * x**2

    def _partial(self, key: Tuple[int, ...], y: ArrayLike, x: ArrayLike) -> ArrayLike:
        y = np.asarray(y, dtype=float)
        x = np.asarray(x, dtype=float)
        zero = np.zeros(np.broadcast(y, x).shape)
        if key == (1,):
            result = 1.0 - 2.0 * self.q_y * y + zero
        elif key == (2,):
            result = 1.0 - 2.0 * self.q_x * x + zero
        elif key == (1, 1):
            result = zero - 2.0 * self.q_y
        elif key == (2, 2):
            result = zero - 2.0 * self.q_x
        else:
            result = zero
        return result[()]

    def parameters(self) -> Dict[str, float]:
        return {"q_x": self.q_x, "q_y": self.q_y}
