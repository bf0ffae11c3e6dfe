"""Second-order small-risk approximations of expected marginal utility."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

from mixrisk.base import BiUtility
from mixrisk.errors import ConfigurationError
from mixrisk.indicators import IndicatorKind, ModelKind, as_model_kind

RELATIVE_ERROR_FLOOR = 1e-12


class TaylorScope(Enum):
    """Which risks contribute curvature terms to the approximation."""

    FULL = "full"
    BACKGROUND_ONLY = "background_only"
    INCOME_ONLY = "income_only"


def taylor_marginal_approx(
    utility: BiUtility,
    s: float,
    means: Tuple[float, float],
    var_income: float,
    var_background: float,
    which: TaylorScope = TaylorScope.FULL,
) -> float:
    """
    Approximate the expected v_1(y + s, x) by expanding around the means.

    v_1(m_y + s, m_x) + 1/2 v_111 Var_income + 1/2 v_122 Var_background, where the
    income term is dropped for BACKGROUND_ONLY and the background term for
    INCOME_ONLY. The same formula serves possibilistic and probabilistic
    variances since both expectations are linear.

    Raises:
        DomainError: If (m_y + s, m_x) is outside v's domain
    """
    y = means[0] + s
    x = means[1]
    value = float(utility.partial((1,), y, x))
    if which in (TaylorScope.FULL, TaylorScope.INCOME_ONLY):
        value += 0.5 * float(utility.partial((1, 1, 1), y, x)) * var_income
    if which in (TaylorScope.FULL, TaylorScope.BACKGROUND_ONLY):
        value += 0.5 * float(utility.partial((1, 2, 2), y, x)) * var_background
    return value


def derivative_gap(
    model: Union[ModelKind, str],
    kind: IndicatorKind,
    utility: BiUtility,
    s_star: float,
    means: Tuple[float, float],
    variances: Tuple[float, float],
) -> float:
    """
    Predicted derivative of the less risky objective at the full-risk optimum.

    The full-risk first-order condition vanishes at ``s_star``, so the baseline
    objective's derivative there is the difference of the two approximations:
    -1/2 v_111 Var_income (add_income), -1/2 v_122 Var_background (add_background)
    and their sum (two_source).

    Args:
        model: Model kind; the probabilistic model has no add_background indicator
        kind: Indicator
        utility: Second-period utility v
        s_star: Full-risk optimal saving
        means: (income mean, background mean)
        variances: (income variance, background variance)

    Raises:
        ConfigurationError: For add_background in the probabilistic model
        DomainError: If the evaluation point is outside v's domain
    """
    model = as_model_kind(model)
    if model is ModelKind.PROBABILISTIC and kind is IndicatorKind.ADD_BACKGROUND:
        raise ConfigurationError("the probabilistic model reports no add_background indicator")
    y = means[0] + s_star
    x = means[1]
    var_income, var_background = variances
    income_gap = -0.5 * float(utility.partial((1, 1, 1), y, x)) * var_income
    background_gap = -0.5 * float(utility.partial((1, 2, 2), y, x)) * var_background
    if kind is IndicatorKind.ADD_INCOME:
        return income_gap
    if kind is IndicatorKind.ADD_BACKGROUND:
        return background_gap
    return income_gap + background_gap


@dataclass(frozen=True)
class TaylorGapResult:
    """Exact versus predicted baseline derivative at one risk scale."""

    kind: IndicatorKind
    epsilon: float
    s_star: float
    exact: float
    approximation: float

    @property
    def absolute_error(self) -> float:
        return abs(self.exact - self.approximation)

    @property
    def relative_error(self) -> Optional[float]:
        if abs(self.exact) <= RELATIVE_ERROR_FLOOR:
            return None
        return self.absolute_error / abs(self.exact)
