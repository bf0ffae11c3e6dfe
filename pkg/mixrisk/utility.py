"""Utility family registry, partial derivatives and admissibility checks."""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, Optional, Sequence, Tuple, Type, Union

import numpy as np

from mixrisk.base import BiUtility, DomainBox, fd_step, normalize_index
from mixrisk.errors import ConfigurationError
from mixrisk.utilities import (
    CallableUtility,
    CaraAdditiveUtility,
    CaraCrraProductUtility,
    LogAdditiveUtility,
    QuadraticUtility,
)

logger = logging.getLogger(__name__)

# Analytic partials must match finite differences within max(ABS, REL * |value|)
# plus the rounding error of the difference itself.
DERIVATIVE_ABS_TOLERANCE = 1e-6
DERIVATIVE_REL_TOLERANCE = 1e-4
ROUNDING_FACTOR = 8.0
EPS = float(np.finfo(float).eps)

_ALL_INDICES: Tuple[Tuple[int, ...], ...] = (
    (1,),
    (2,),
    (1, 1),
    (1, 2),
    (2, 2),
    (1, 1, 1),
    (1, 1, 2),
    (1, 2, 2),
    (2, 2, 2),
)


class UtilityFamily(Enum):
    """Supported utility families."""

    CARA_CRRA_PRODUCT = "cara_crra_product"
    LOG_ADDITIVE = "log_additive"
    CARA_ADDITIVE = "cara_additive"
    QUADRATIC = "quadratic"
    USER_TABULATED = "user_tabulated"


# Registry of utility families
_FAMILIES: Dict[UtilityFamily, Type[BiUtility]] = {
    UtilityFamily.CARA_CRRA_PRODUCT: CaraCrraProductUtility,
    UtilityFamily.LOG_ADDITIVE: LogAdditiveUtility,
    UtilityFamily.CARA_ADDITIVE: CaraAdditiveUtility,
    UtilityFamily.QUADRATIC: QuadraticUtility,
    UtilityFamily.USER_TABULATED: CallableUtility,
}


def make_utility(
    family: Union[UtilityFamily, str],
    domain: Optional[DomainBox] = None,
    scale: float = 1.0,
    **parameters: Any,
) -> BiUtility:
    """
    Build a utility from its family name and parameters.

    Args:
        family: Family enum or its string value (e.g. 'cara_crra_product')
        domain: Domain box; each family has a finite default
        scale: Positive factor applied to the whole utility
        **parameters: Family parameters (alpha, gamma, beta, q_y, q_x, func)

    Returns:
        The utility, wrapped in a ScaledUtility when scale != 1

    Raises:
        ConfigurationError: If the family or parameters are invalid

    Examples:
        >>> v = make_utility("cara_crra_product", alpha=1.0, gamma=0.75)
        >>> v.partial((1, 2, 2), 0.0, 1.0)  # -0.75
    """
    if isinstance(family, str):
        try:
            family = UtilityFamily(family.lower())
        except ValueError:
            valid = ", ".join(f.value for f in UtilityFamily)
            raise ConfigurationError(f"Invalid utility family: {family}. Valid families: {valid}")

    utility_class = _FAMILIES.get(family)
    if utility_class is None:
        raise ConfigurationError(f"No utility class registered for family: {family.value}")

    if domain is not None:
        parameters["domain"] = domain
    try:
        utility = utility_class(**parameters)
    except TypeError as exc:
        raise ConfigurationError(f"bad parameters for {family.value}: {exc}") from exc

    if scale != 1.0:
        return utility.scaled(scale)
    return utility


def register_family(family: UtilityFamily, utility_class: type) -> None:
    """
    Register a utility class for a family, overriding the default.

    Raises:
        TypeError: If utility_class is not a subclass of BiUtility
    """
    if not isinstance(utility_class, type) or not issubclass(utility_class, BiUtility):
        raise TypeError("utility_class must be a subclass of BiUtility")

    _FAMILIES[family] = utility_class


def partial(utility: BiUtility, index: Sequence[int], point: Tuple[float, float]) -> float:
    """
    Evaluate v_index at ``point = (y, x)``.

    Raises:
        DomainError: If the point is outside the domain box
        UnsupportedDerivativeError: If the index is longer than three
    """
    y, x = point
    return float(utility.partial(index, y, x))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the grid checks run by :func:`validate_utility`."""

    family: str
    grid_size: int
    increasing_income: bool
    increasing_background: bool
    concave: bool
    concave_in_income: bool
    max_derivative_discrepancy: Optional[float]
    derivatives_agree: bool

    @property
    def passed(self) -> bool:
        return (
            self.increasing_income
            and self.increasing_background
            and self.concave
            and self.derivatives_agree
        )

    def failures(self) -> Tuple[str, ...]:
        names = []
        if not self.increasing_income:
            names.append("v_1 > 0")
        if not self.increasing_background:
            names.append("v_2 > 0")
        if not self.concave:
            names.append("negative-definite Hessian")
        if not self.derivatives_agree:
            names.append("analytic derivatives")
        return tuple(names)


def validation_grid(domain: DomainBox, grid_size: int) -> Tuple[np.ndarray, np.ndarray]:
    """Tensor grid of ``grid_size`` points per axis spanning the domain box."""
    if grid_size < 2:
        raise ConfigurationError(
            f"validation grid needs at least 2 points per axis, got {grid_size}"
        )
    if not domain.is_finite:
        raise ConfigurationError("cannot build a validation grid on an unbounded domain box")
    ys = np.linspace(domain.y_min, domain.y_max, grid_size)
    xs = np.linspace(domain.x_min, domain.x_max, grid_size)
    return np.meshgrid(ys, xs, indexing="ij")


def _one_step_difference(
    utility: BiUtility, key: Tuple[int, ...], y: float, x: float
) -> Tuple[float, float]:
    # Central difference of the analytic lower-order partial along the last index,
    # with the rounding error of subtracting the two evaluations.
    direction = key[-1]
    lower = key[:-1]

    def base(a: float, b: float) -> float:
        return float(utility._partial(lower, a, b) if lower else utility._value(a, b))

    if direction == 1:
        h = fd_step(y)
        upper, lower_value = base(y + h, x), base(y - h, x)
    else:
        h = fd_step(x)
        upper, lower_value = base(y, x + h), base(y, x - h)
    rounding = ROUNDING_FACTOR * EPS * (abs(upper) + abs(lower_value)) / (2.0 * h)
    return (upper - lower_value) / (2.0 * h), rounding


def derivative_discrepancy(
    utility: BiUtility, ys: np.ndarray, xs: np.ndarray
) -> Tuple[float, bool]:
    """Largest analytic-vs-difference gap over the points and whether all are in tolerance."""
    worst = 0.0
    agree = True
    for key in _ALL_INDICES:
        for y, x in zip(np.ravel(ys), np.ravel(xs)):
            exact = float(utility._partial(normalize_index(key), float(y), float(x)))
            approx, rounding = _one_step_difference(utility, key, float(y), float(x))
            gap = abs(exact - approx)
            worst = max(worst, gap)
            allowed = max(DERIVATIVE_ABS_TOLERANCE, DERIVATIVE_REL_TOLERANCE * abs(exact))
            if gap > allowed + rounding:
                agree = False
    return worst, agree


@lru_cache(maxsize=128)
def validate_utility(utility: BiUtility, grid_size: int = 11) -> ValidationReport:
    """
    Check monotonicity, strict concavity and derivative agreement on a grid.

    Concavity uses the leading principal minors of the Hessian (v_11 < 0 and
    v_11 v_22 - v_12**2 > 0). Families with closed-form partials compare each
    order-k partial with a central difference of the order-(k-1) partial.

    Args:
        utility: Utility to check
        grid_size: Points per axis of the validation grid

    Returns:
        ValidationReport

    Raises:
        ConfigurationError: If the grid is empty or the domain is unbounded
    """
    ys, xs = validation_grid(utility.domain, grid_size)
    v1 = utility.partial((1,), ys, xs)
    v2 = utility.partial((2,), ys, xs)
    v11 = utility.partial((1, 1), ys, xs)
    v12 = utility.partial((1, 2), ys, xs)
    v22 = utility.partial((2, 2), ys, xs)

    discrepancy: Optional[float] = None
    agree = True
    if utility.analytic:
        discrepancy, agree = derivative_discrepancy(utility, ys, xs)

    report = ValidationReport(
        family=utility.family,
        grid_size=grid_size,
        increasing_income=bool(np.all(v1 > 0)),
        increasing_background=bool(np.all(v2 > 0)),
        concave=bool(np.all(v11 < 0) and np.all(v11 * v22 - v12**2 > 0)),
        concave_in_income=bool(np.all(v11 < 0)),
        max_derivative_discrepancy=discrepancy,
        derivatives_agree=agree,
    )
    logger.debug("validated %s: %s", utility.family, report)
    return report
