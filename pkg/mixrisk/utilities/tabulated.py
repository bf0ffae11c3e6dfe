"""User-supplied utilities differentiated by central finite differences."""

from dataclasses import dataclass, field
from typing import Callable, Dict

import numpy as np

from mixrisk.base import ArrayLike, BiUtility, DomainBox


@dataclass(frozen=True)
class CallableUtility(BiUtility):
    """
    Wrap any vectorized callable v(y, x) defined on ``domain``.

    Partial derivatives come from nested central-difference stencils, so values
    near the domain boundary need the stencil points to stay in the region where
    ``func`` is defined. The step is max(1e-5, 1e-5 |c|) for first derivatives and
    grows 10x with each further order, so third derivatives at |c| <= 1 use 1e-3.
    """

    family = "user_tabulated"
    analytic = False

    func: Callable[[ArrayLike, ArrayLike], ArrayLike]
    domain: DomainBox
    name: str = field(default="callable")

    def __post_init__(self) -> None:
        if not callable(self.func):
            raise TypeError("func must be callable")
        if not isinstance(self.domain, DomainBox):
            raise TypeError("domain must be a DomainBox")

    def _value(self, y: ArrayLike, x: ArrayLike) -> ArrayLike:
        return np.asarray(self.func(y, x), dtype=float)[()]

    def parameters(self) -> Dict[str, float]:
        return {}
