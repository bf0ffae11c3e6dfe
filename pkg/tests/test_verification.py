"""Tests for risk-scaling studies and the CARA-CRRA two-source threshold."""

from typing import Callable

import pytest

from mixrisk import (
    ConfigurationError,
    IndicatorKind,
    ModelKind,
    Sign,
    cara_crra_threshold_report,
    epsilon_scaling_study,
    precautionary_report,
)
from mixrisk.solver import SavingScenario
from mixrisk.verification import DEFAULT_EPSILONS, threshold_parameters
from tests.conftest import cara_scenario, log_scenario, quadratic_scenario, threshold_scenario


def _assert_higher_order(scenario: SavingScenario) -> None:
    study = epsilon_scaling_study(scenario)
    assert study.epsilons == (0.1, 0.05, 0.025)
    assert all(order is not None for order in study.orders(IndicatorKind.ADD_INCOME))
    for kind in study.kinds():
        assert study.monotone(kind), kind
        for order in study.orders(kind):
            assert order is None or order >= 2.5, (kind, study.errors(kind))


class TestEpsilonScaling:
    """Test cases for epsilon_scaling_study."""

    @pytest.mark.parametrize("model", [ModelKind.MIXED_I, ModelKind.MIXED_II])
    def test_cara_additive(self, model: ModelKind) -> None:
        """Test that Taylor errors shrink faster than the variances."""
        _assert_higher_order(cara_scenario(model, 0.5, 1.5))

    @pytest.mark.parametrize("model", [ModelKind.MIXED_I, ModelKind.MIXED_II])
    def test_cara_crra(self, model: ModelKind) -> None:
        """Test the non-separable product utility with either risk fuzzy."""
        _assert_higher_order(threshold_scenario(0.5, 1.5, model))

    def test_rows_per_scale_and_indicator(self) -> None:
        """Test one row per (scale, indicator) for the probabilistic model."""
        study = epsilon_scaling_study(cara_scenario(ModelKind.PROBABILISTIC, 0.5, 1.5), (0.2, 0.1))
        assert len(study.rows) == 4
        assert study.kinds() == (IndicatorKind.ADD_INCOME, IndicatorKind.TWO_SOURCE)

    def test_selected_kinds(self) -> None:
        """Test restricting the study to one indicator."""
        study = epsilon_scaling_study(
            cara_scenario(ModelKind.MIXED_I, 0.5, 1.5), (0.2, 0.1), [IndicatorKind.ADD_INCOME]
        )
        assert {row.kind for row in study.rows} == {IndicatorKind.ADD_INCOME}

    @pytest.mark.parametrize(
        "epsilons, message",
        [
            ((0.1,), "at least two"),
            ((0.1, 0.1), "strictly decreasing"),
            ((0.05, 0.1), "strictly decreasing"),
            ((0.1, -0.05), "must be positive"),
        ],
    )
    def test_invalid_scales(self, epsilons: tuple, message: str) -> None:
        """Test that scales must be positive and strictly decreasing."""
        with pytest.raises(ConfigurationError, match=message):
            epsilon_scaling_study(cara_scenario(ModelKind.MIXED_I), epsilons)


class TestSmallRiskAgreement:
    """Test cases for solved signs against the third-derivative predicates as risks shrink."""

    @pytest.mark.parametrize("model", [ModelKind.MIXED_I, ModelKind.MIXED_II])
    @pytest.mark.parametrize(
        "build",
        [
            lambda model: cara_scenario(model, 0.5, 1.5),
            lambda model: threshold_scenario(0.5, 1.5, model),
            log_scenario,
        ],
        ids=["cara_additive", "cara_crra_product", "log_additive"],
    )
    def test_solved_signs_follow_predicates(
        self, build: Callable[[ModelKind], SavingScenario], model: ModelKind
    ) -> None:
        """Test that no indicator contradicts its predicate at any of the default scales."""
        scenario = build(model)
        for epsilon in DEFAULT_EPSILONS:
            report = precautionary_report(scenario.scaled(epsilon))
            assert report.indicator(IndicatorKind.ADD_INCOME).agreement is True, epsilon
            assert report.indicator(IndicatorKind.TWO_SOURCE).agreement is True, epsilon
            for item in report.indicators:
                assert item.agreement is not False, (epsilon, item)


class TestThresholdReport:
    """Test cases for cara_crra_threshold_report."""

    def test_threshold_sum(self) -> None:
        """Test that alpha = 1, gamma = 3/4 puts the threshold at c + d = 0.5."""
        report = cara_crra_threshold_report(1.0, 0.75, 0.2, 0.25)
        assert report.threshold_sum == pytest.approx(0.5)
        assert report.var_fuzzy == pytest.approx(3.0 * report.var_random)
        assert report.rhs == pytest.approx(report.midpoint_rhs)

    @pytest.mark.parametrize(
        "c, d, expected",
        [
            (0.2, 0.25, Sign.NEGATIVE),
            (0.225, 0.275, Sign.ZERO),
            (0.25, 0.3, Sign.POSITIVE),
        ],
    )
    def test_predicate_sign(self, c: float, d: float, expected: Sign) -> None:
        """Test the sign of the closed-form condition below, at and above the threshold."""
        report = cara_crra_threshold_report(1.0, 0.75, c, d)
        assert report.predicate_sign is expected
        assert report.report is None
        assert report.agreement is None
        if expected is not Sign.ZERO:
            assert (report.combination > 0) is (expected is Sign.POSITIVE)

    @pytest.mark.parametrize("c, d", [(0.2, 0.25), (0.25, 0.3)])
    def test_solved_indicator_agrees(self, c: float, d: float) -> None:
        """Test that the solved two_source indicator has the predicted sign."""
        report = cara_crra_threshold_report(1.0, 0.75, c, d, template=threshold_scenario(c, d))
        assert report.solved_two_source is not None
        assert report.agreement is True

    @pytest.mark.parametrize(
        "alpha, gamma, c, d",
        [(0.0, 0.5, 0.2, 0.3), (1.0, 1.5, 0.2, 0.3), (1.0, 0.5, 0.3, 0.2), (1.0, 0.5, 0.0, 0.2)],
    )
    def test_parameter_ranges(self, alpha: float, gamma: float, c: float, d: float) -> None:
        """Test that out-of-range parameters are configuration errors."""
        with pytest.raises(ConfigurationError):
            cara_crra_threshold_report(alpha, gamma, c, d)


class TestThresholdParameters:
    """Test cases for recognizing the threshold structure."""

    def test_recognized(self) -> None:
        """Test that the matching scenario yields its parameters."""
        assert threshold_parameters(threshold_scenario(0.2, 0.25)) == {
            "alpha": 1.0,
            "gamma": 0.75,
            "c": 0.2,
            "d": 0.25,
        }

    def test_other_structures(self) -> None:
        """Test that other utilities or models give None."""
        assert threshold_parameters(cara_scenario(ModelKind.MIXED_I)) is None
        assert threshold_parameters(cara_scenario(ModelKind.PROBABILISTIC)) is None


class TestQuadraticControl:
    """Test cases for a utility whose Taylor expansion is exact."""

    @pytest.mark.parametrize("model", [ModelKind.MIXED_I, ModelKind.MIXED_II])
    @pytest.mark.parametrize("spread", [0.1, 0.25, 0.5])
    def test_errors_stay_at_roundoff(self, spread: float, model: ModelKind) -> None:
        """Test that quadratic utility leaves no measurable Taylor error."""
        study = epsilon_scaling_study(quadratic_scenario(model, spread))
        for kind in study.kinds():
            assert max(study.errors(kind)) <= 1e-12
            assert study.orders(kind) == (None, None)

    @pytest.mark.parametrize("model", [ModelKind.MIXED_I, ModelKind.MIXED_II])
    @pytest.mark.parametrize("spread", [0.1, 0.25, 0.5])
    def test_every_indicator_is_a_tie(self, spread: float, model: ModelKind) -> None:
        """Test that zero prudence and zero cross prudence give no precautionary saving."""
        report = precautionary_report(quadratic_scenario(model, spread))
        assert len(report.indicators) == 3
        for item in report.indicators:
            assert item.sign is Sign.ZERO, item
            assert item.predicate_sign is Sign.ZERO, item
            assert item.agreement is None
