"""Tests for indicator kinds and the third-derivative sign predicates."""

import pytest

from mixrisk import (
    CaraCrraProductUtility,
    ConfigurationError,
    DomainError,
    IndicatorKind,
    ModelKind,
    Sign,
    Situation,
    sign_condition,
)
from mixrisk.indicators import INDICATORS, as_model_kind, predicate_sign, sign_of

V = CaraCrraProductUtility(1.0, 0.75)
POINT = (0.0, 1.0)


class TestKinds:
    """Test cases for the enums and their relations."""

    @pytest.mark.parametrize(
        "kind, baseline",
        [
            (IndicatorKind.ADD_INCOME, Situation.BACKGROUND_ONLY),
            (IndicatorKind.TWO_SOURCE, Situation.CERTAINTY),
            (IndicatorKind.ADD_BACKGROUND, Situation.INCOME_ONLY),
        ],
    )
    def test_baselines(self, kind: IndicatorKind, baseline: Situation) -> None:
        """Test the situation each indicator is measured against."""
        assert kind.baseline is baseline

    def test_probabilistic_model_reports_two_indicators(self) -> None:
        """Test that add_background exists only in the mixed models."""
        assert IndicatorKind.ADD_BACKGROUND not in INDICATORS[ModelKind.PROBABILISTIC]
        assert len(INDICATORS[ModelKind.MIXED_II]) == 3

    def test_model_from_string(self) -> None:
        """Test conversion from the file spelling."""
        assert as_model_kind("mixed-II") is ModelKind.MIXED_II
        with pytest.raises(ConfigurationError, match="Valid models"):
            as_model_kind("mixed")

    def test_sign_of(self) -> None:
        """Test the tolerance band around zero."""
        assert sign_of(1e-12, 1e-10) is Sign.ZERO
        assert sign_of(-1e-9, 1e-10) is Sign.NEGATIVE
        assert sign_of(2.0, 1e-10) is Sign.POSITIVE


class TestSignCondition:
    """Test cases for sign_condition."""

    def test_single_risk_predicates(self) -> None:
        """Test v_111 = 4 and v_122 = -3/4 at (0, 1) for alpha = 1, gamma = 3/4."""
        add_income = sign_condition("mixed-I", IndicatorKind.ADD_INCOME, V, POINT, 0.1, 0.2)
        add_background = sign_condition("mixed-I", IndicatorKind.ADD_BACKGROUND, V, POINT, 0.1, 0.2)
        assert add_income == pytest.approx(4.0)
        assert add_background == pytest.approx(-0.75)

    @pytest.mark.parametrize(
        "model, expected",
        [(ModelKind.MIXED_I, 4.0 * 0.1 - 0.75 * 0.2), (ModelKind.MIXED_II, 4.0 * 0.2 - 0.75 * 0.1)],
    )
    def test_two_source_pairs_variances_by_model(self, model: ModelKind, expected: float) -> None:
        """Test that the fuzzy variance weighs income in mixed-I and background in mixed-II."""
        value = sign_condition(model, IndicatorKind.TWO_SOURCE, V, POINT, 0.1, 0.2)
        assert value == pytest.approx(expected)

    def test_probabilistic_model_refused(self) -> None:
        """Test that there is no fuzzy variance to pair in the probabilistic model."""
        with pytest.raises(ConfigurationError, match="no fuzzy variance"):
            sign_condition(ModelKind.PROBABILISTIC, IndicatorKind.ADD_INCOME, V, POINT, 0.1, 0.2)

    def test_negative_variance(self) -> None:
        """Test that variances must be non-negative."""
        with pytest.raises(ConfigurationError, match="non-negative"):
            sign_condition(ModelKind.MIXED_I, IndicatorKind.TWO_SOURCE, V, POINT, -0.1, 0.2)

    def test_point_outside_domain(self) -> None:
        """Test that the evaluation point is checked against v's domain."""
        with pytest.raises(DomainError):
            sign_condition(ModelKind.MIXED_I, IndicatorKind.ADD_INCOME, V, (0.0, -1.0), 0.1, 0.2)


class TestPredicateSign:
    """Test cases for the relative tie band of the predicate."""

    def test_cancelling_terms_are_a_tie(self) -> None:
        """Test that v_111 Var_i + v_122 Var_b = 3 - 3 reads as zero."""
        sign = predicate_sign(IndicatorKind.TWO_SOURCE, V, POINT, 0.75, 4.0)
        assert sign is Sign.ZERO

    def test_small_but_clear_imbalance(self) -> None:
        """Test that an imbalance well above the tie band keeps its sign."""
        assert predicate_sign(IndicatorKind.TWO_SOURCE, V, POINT, 0.75, 4.01) is Sign.NEGATIVE
        assert predicate_sign(IndicatorKind.TWO_SOURCE, V, POINT, 0.76, 4.0) is Sign.POSITIVE
