"""Model kinds, risk situations, precautionary indicators and their sign predicates."""

from enum import Enum
from typing import Dict, Tuple, Union

from mixrisk.base import BiUtility
from mixrisk.errors import ConfigurationError

# Predicates within this fraction of their term magnitudes count as zero.
PREDICATE_RELATIVE_TIE = 1e-9


class ModelKind(Enum):
    """Which risk is fuzzy: none, the income risk (I) or the background risk (II)."""

    PROBABILISTIC = "probabilistic"
    MIXED_I = "mixed-I"
    MIXED_II = "mixed-II"


class Situation(Enum):
    """Which risks are present; an absent risk is replaced by its mean."""

    FULL_RISK = "full_risk"
    INCOME_ONLY = "income_only"
    BACKGROUND_ONLY = "background_only"
    CERTAINTY = "certainty"

    @property
    def risky_income(self) -> bool:
        return self in (Situation.FULL_RISK, Situation.INCOME_ONLY)

    @property
    def risky_background(self) -> bool:
        return self in (Situation.FULL_RISK, Situation.BACKGROUND_ONLY)


class IndicatorKind(Enum):
    """Precautionary saving induced by adding a risk to a less risky situation."""

    ADD_INCOME = "add_income"
    TWO_SOURCE = "two_source"
    ADD_BACKGROUND = "add_background"

    @property
    def baseline(self) -> Situation:
        """The situation whose optimal saving is subtracted from the full-risk one."""
        return _BASELINES[self]


class Sign(Enum):
    POSITIVE = "+"
    NEGATIVE = "-"
    ZERO = "0"


_BASELINES: Dict[IndicatorKind, Situation] = {
    IndicatorKind.ADD_INCOME: Situation.BACKGROUND_ONLY,
    IndicatorKind.TWO_SOURCE: Situation.CERTAINTY,
    IndicatorKind.ADD_BACKGROUND: Situation.INCOME_ONLY,
}

SITUATIONS: Dict[ModelKind, Tuple[Situation, ...]] = {
    ModelKind.PROBABILISTIC: (
        Situation.FULL_RISK,
        Situation.BACKGROUND_ONLY,
        Situation.CERTAINTY,
    ),
    ModelKind.MIXED_I: tuple(Situation),
    ModelKind.MIXED_II: tuple(Situation),
}

INDICATORS: Dict[ModelKind, Tuple[IndicatorKind, ...]] = {
    ModelKind.PROBABILISTIC: (IndicatorKind.ADD_INCOME, IndicatorKind.TWO_SOURCE),
    ModelKind.MIXED_I: tuple(IndicatorKind),
    ModelKind.MIXED_II: tuple(IndicatorKind),
}


def as_model_kind(model: Union[ModelKind, str]) -> ModelKind:
    """Convert a string such as 'mixed-I' to a ModelKind."""
    if isinstance(model, ModelKind):
        return model
    try:
        return ModelKind(model)
    except ValueError:
        valid = ", ".join(m.value for m in ModelKind)
        raise ConfigurationError(f"Invalid model: {model}. Valid models: {valid}")


def sign_of(value: float, tolerance: float) -> Sign:
    if abs(value) <= tolerance:
        return Sign.ZERO
    return Sign.POSITIVE if value > 0 else Sign.NEGATIVE


def pair_variances(model: ModelKind, var_fuzzy: float, var_random: float) -> Tuple[float, float]:
    """
    Map (fuzzy, random) variances to (income, background) variances.

    The fuzzy number is the income risk in mixed-I and the background risk in mixed-II.
    """
    if var_fuzzy < 0 or var_random < 0:
        raise ConfigurationError("variances must be non-negative")
    if model is ModelKind.MIXED_I:
        return var_fuzzy, var_random
    if model is ModelKind.MIXED_II:
        return var_random, var_fuzzy
    raise ConfigurationError(
        "the probabilistic model has no fuzzy variance; use predicate_value with "
        "income and background variances"
    )


def predicate_terms(
    kind: IndicatorKind,
    utility: BiUtility,
    point: Tuple[float, float],
    var_income: float,
    var_background: float,
) -> Tuple[float, float]:
    """Income and background contributions whose sum is the sign predicate."""
    y, x = point
    if kind is IndicatorKind.ADD_INCOME:
        return float(utility.partial((1, 1, 1), y, x)), 0.0
    if kind is IndicatorKind.ADD_BACKGROUND:
        return 0.0, float(utility.partial((1, 2, 2), y, x))
    return (
        float(utility.partial((1, 1, 1), y, x)) * var_income,
        float(utility.partial((1, 2, 2), y, x)) * var_background,
    )


def predicate_value(
    kind: IndicatorKind,
    utility: BiUtility,
    point: Tuple[float, float],
    var_income: float,
    var_background: float,
) -> float:
    """
    Quantity whose sign the small-risk theory ties to the indicator.

    v_111 for add_income, v_122 for add_background and
    v_111 Var_income + v_122 Var_background for two_source, all at ``point``.

    Raises:
        DomainError: If the point is outside v's domain
    """
    income_term, background_term = predicate_terms(
        kind, utility, point, var_income, var_background
    )
    return income_term + background_term


def predicate_sign(
    kind: IndicatorKind,
    utility: BiUtility,
    point: Tuple[float, float],
    var_income: float,
    var_background: float,
) -> Sign:
    income_term, background_term = predicate_terms(
        kind, utility, point, var_income, var_background
    )
    tie = PREDICATE_RELATIVE_TIE * (abs(income_term) + abs(background_term))
    return sign_of(income_term + background_term, tie)


def sign_condition(
    model: Union[ModelKind, str],
    kind: IndicatorKind,
    utility: BiUtility,
    point: Tuple[float, float],
    var_fuzzy: float,
    var_random: float,
) -> float:
    """
    Signed predicate for a mixed model, pairing variances by model type.

    Args:
        model: mixed-I or mixed-II
        kind: Indicator whose condition is evaluated
        utility: Second-period utility v
        point: (income mean + full-risk optimal saving, background mean)
        var_fuzzy: Possibilistic variance of the fuzzy risk
        var_random: Variance of the random risk

    Raises:
        ConfigurationError: For the probabilistic model or negative variances
        DomainError: If the point is outside v's domain
    """
    var_income, var_background = pair_variances(as_model_kind(model), var_fuzzy, var_random)
    return predicate_value(kind, utility, point, var_income, var_background)
