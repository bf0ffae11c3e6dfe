"""Tests for utility families, partial derivatives and the validation report."""

import numpy as np
import pytest

from mixrisk import (
    BiUtility,
    CallableUtility,
    CaraAdditiveUtility,
    CaraCrraProductUtility,
    ConfigurationError,
    DomainBox,
    DomainError,
    LogAdditiveUtility,
    QuadraticUtility,
    ScaledUtility,
    UtilityFamily,
    make_utility,
    register_family,
    validate_utility,
)
from mixrisk.base import fd_step
from mixrisk.errors import UnsupportedDerivativeError
from mixrisk.utility import _FAMILIES, derivative_discrepancy, partial

THIRD_ORDER = ((1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2))


class TestPartials:
    """Test cases for analytic partial derivatives."""

    def test_cara_crra_third_derivatives(self) -> None:
        """Test v_111 = 4 and v_122 = -0.75 at (0, 1) for alpha = 1, gamma = 3/4."""
        v = CaraCrraProductUtility(1.0, 0.75)
        assert partial(v, (1, 1, 1), (0.0, 1.0)) == pytest.approx(4.0, abs=1e-14)
        assert partial(v, (1, 2, 2), (0.0, 1.0)) == pytest.approx(-0.75, abs=1e-14)

    def test_index_order_does_not_matter(self) -> None:
        """Test that v_122, v_212 and v_221 coincide."""
        v = CaraCrraProductUtility(2.0, 0.5)
        values = {partial(v, index, (0.3, 0.7)) for index in ((1, 2, 2), (2, 1, 2), (2, 2, 1))}
        assert len(values) == 1

    def test_separable_cross_partial_vanishes(self) -> None:
        """Test that additively separable families have v_12 = 0."""
        assert partial(LogAdditiveUtility(), (1, 2), (2.0, 3.0)) == 0.0
        assert partial(CaraAdditiveUtility(1.0, 2.0), (1, 2, 2), (0.5, -0.5)) == 0.0

    def test_quadratic_third_order_vanishes(self) -> None:
        """Test that every third-order partial of the quadratic family is zero."""
        v = QuadraticUtility(0.05, 0.05, DomainBox(0.0, 5.0, 0.0, 5.0))
        ys, xs = np.meshgrid(np.linspace(0, 5, 6), np.linspace(0, 5, 6), indexing="ij")
        for index in THIRD_ORDER:
            assert np.all(v.partial(index, ys, xs) == 0.0)

    def test_fourth_order_unsupported(self) -> None:
        """Test that order four raises UnsupportedDerivativeError."""
        with pytest.raises(UnsupportedDerivativeError, match="up to order 3"):
            partial(LogAdditiveUtility(), (1, 1, 1, 1), (1.0, 1.0))

    def test_bad_index_rejected(self) -> None:
        """Test that indices other than 1 and 2 are configuration errors."""
        with pytest.raises(ConfigurationError):
            partial(LogAdditiveUtility(), (3,), (1.0, 1.0))

    def test_point_outside_domain(self) -> None:
        """Test that evaluating outside the domain box names the point."""
        with pytest.raises(DomainError, match=r"point \(y=-1"):
            partial(LogAdditiveUtility(), (1,), (-1.0, 1.0))

    def test_value_outside_domain(self) -> None:
        """Test that calling the utility itself checks the domain."""
        v = CaraCrraProductUtility(1.0, 0.75)
        with pytest.raises(DomainError):
            v(0.0, 0.0)

    @pytest.mark.parametrize(
        "utility",
        [
            CaraCrraProductUtility(1.0, 0.75, DomainBox(-2.0, 2.0, 0.1, 3.0)),
            CaraCrraProductUtility(0.5, 2.0, DomainBox(-2.0, 2.0, 0.1, 3.0)),
            LogAdditiveUtility(DomainBox(0.2, 10.0, 0.2, 10.0)),
            CaraAdditiveUtility(1.5, 0.5),
            QuadraticUtility(0.05, 0.1),
        ],
    )
    def test_analytic_partials_match_differences(self, utility: BiUtility) -> None:
        """Test analytic partials against differences at 100 random interior points."""
        rng = np.random.default_rng(20240611)
        box = utility.domain
        ys = rng.uniform(box.y_min, box.y_max, 100) * 0.98 + 0.01 * (box.y_min + box.y_max)
        xs = rng.uniform(box.x_min, box.x_max, 100) * 0.98 + 0.01 * (box.x_min + box.x_max)
        worst, agree = derivative_discrepancy(utility, ys, xs)
        assert agree, f"largest discrepancy {worst}"


class TestCallableUtility:
    """Test cases for the finite-difference family."""

    def test_first_and_third_derivatives(self) -> None:
        """Test finite-difference partials of ln y + ln x."""
        v = CallableUtility(lambda y, x: np.log(y) + np.log(x), DomainBox(1.0, 10.0, 1.0, 10.0))
        assert partial(v, (1,), (2.0, 3.0)) == pytest.approx(0.5, rel=1e-8)
        assert partial(v, (2, 2), (2.0, 3.0)) == pytest.approx(-1.0 / 9.0, rel=1e-5)
        assert partial(v, (1, 1, 1), (2.0, 3.0)) == pytest.approx(0.25, rel=1e-3)

    def test_mixed_partial_matches_closed_form(self) -> None:
        """Test that a wrapped CARA-CRRA function reproduces v_122."""
        closed = CaraCrraProductUtility(1.0, 0.75)
        wrapped = CallableUtility(closed._value, closed.domain, name="cara_crra_copy")
        assert partial(wrapped, (1, 2, 2), (0.0, 1.0)) == pytest.approx(-0.75, rel=1e-3)

    def test_validation_skips_derivative_check(self) -> None:
        """Test that callables report no derivative discrepancy."""
        v = CallableUtility(lambda y, x: np.log(y) + np.log(x), DomainBox(1.0, 10.0, 1.0, 10.0))
        report = validate_utility(v, grid_size=5)
        assert report.max_derivative_discrepancy is None
        assert report.family == "user_tabulated"
        assert report.passed

    def test_func_must_be_callable(self) -> None:
        """Test that a non-callable is rejected."""
        with pytest.raises(TypeError, match="callable"):
            CallableUtility(3.0, DomainBox(0.0, 1.0, 0.0, 1.0))  # type: ignore

    @pytest.mark.parametrize(
        "coordinate, order, expected",
        [(0.5, 1, 1e-5), (1.0, 3, 1e-3), (200.0, 1, 2e-3), (200.0, 2, 2e-2)],
    )
    def test_step_widens_with_order(self, coordinate: float, order: int, expected: float) -> None:
        """Test the relative step floor and its tenfold widening per extra order."""
        assert fd_step(coordinate, order) == pytest.approx(expected, rel=1e-12)


class TestValidation:
    """Test cases for validate_utility."""

    def test_log_additive_passes(self) -> None:
        """Test that ln y + ln x passes every check on [1, 10]^2."""
        report = validate_utility(LogAdditiveUtility(DomainBox(1.0, 10.0, 1.0, 10.0)))
        assert report.passed
        assert report.failures() == ()
        assert report.max_derivative_discrepancy is not None

    def test_cara_crra_is_decreasing_in_background(self) -> None:
        """Test that the CARA-CRRA product increases in y but decreases in x."""
        v = CaraCrraProductUtility(1.0, 0.75, DomainBox(-1.0, 1.0, 0.1, 1.0))
        report = validate_utility(v)
        assert report.increasing_income
        assert not report.increasing_background
        assert "v_2 > 0" in report.failures()
        assert not report.passed

    def test_quadratic_passes(self) -> None:
        """Test that the quadratic family passes on [0, 5]^2."""
        report = validate_utility(QuadraticUtility(0.05, 0.05, DomainBox(0.0, 5.0, 0.0, 5.0)))
        assert report.passed

    def test_cara_additive_passes_on_default_box(self) -> None:
        """Test that large values at the box edge do not fail the derivative check."""
        v = CaraAdditiveUtility(1.0, 1.0)
        assert v.domain == DomainBox(-20.0, 20.0, -20.0, 20.0)
        report = validate_utility(v)
        assert report.derivatives_agree
        assert report.passed

    def test_wrong_analytic_partial_is_flagged(self) -> None:
        """Test that a one-percent error in v_1 still fails the derivative check."""

        class OffByOnePercent(CaraAdditiveUtility):
            def _partial(self, key, y, x):  # type: ignore[no-untyped-def]
                value = super()._partial(key, y, x)
                return 1.01 * value if key == (1,) else value

        report = validate_utility(OffByOnePercent(1.0, 1.0, DomainBox(-2.0, 2.0, -2.0, 2.0)))
        assert not report.derivatives_agree
        assert report.failures() == ("analytic derivatives",)

    def test_grid_needs_two_points(self) -> None:
        """Test that a one-point grid is a configuration error."""
        with pytest.raises(ConfigurationError, match="at least 2 points"):
            validate_utility(LogAdditiveUtility(), grid_size=1)

    def test_scaled_utility_keeps_signs(self) -> None:
        """Test that 2 v has the same family, domain and validation outcome as v."""
        v = CaraAdditiveUtility(1.0, 1.0)
        doubled = 2.0 * v
        assert isinstance(doubled, ScaledUtility)
        assert doubled.family == v.family
        assert doubled.domain == v.domain
        assert validate_utility(doubled).passed
        assert partial(doubled, (1, 1, 1), (0.0, 0.0)) == 2.0 * partial(v, (1, 1, 1), (0.0, 0.0))


class TestRegistry:
    """Test cases for make_utility and register_family."""

    def test_make_by_name(self) -> None:
        """Test building a family from its string name."""
        v = make_utility("cara_crra_product", alpha=1.0, gamma=0.75)
        assert isinstance(v, CaraCrraProductUtility)
        assert v.parameters() == {"alpha": 1.0, "gamma": 0.75}

    def test_make_with_domain_and_scale(self) -> None:
        """Test that domain and scale are applied."""
        box = DomainBox(1.0, 2.0, 1.0, 2.0)
        v = make_utility(UtilityFamily.LOG_ADDITIVE, domain=box, scale=3.0)
        assert isinstance(v, ScaledUtility)
        assert v.domain == box
        assert v.factor == 3.0

    def test_unknown_family(self) -> None:
        """Test that an unknown family lists the valid ones."""
        with pytest.raises(ConfigurationError, match="Valid families"):
            make_utility("crra")

    def test_bad_parameters(self) -> None:
        """Test that missing or unknown parameters become configuration errors."""
        with pytest.raises(ConfigurationError, match="bad parameters"):
            make_utility("cara_additive", alpha=1.0)
        with pytest.raises(ConfigurationError):
            make_utility("cara_crra_product", alpha=1.0, gamma=1.0)

    def test_scale_must_be_positive(self) -> None:
        """Test that a non-positive scale is rejected."""
        with pytest.raises(ConfigurationError, match="scale must be positive"):
            make_utility("log_additive", scale=-1.0)

    def test_register_family(self) -> None:
        """Test overriding a family with a custom subclass."""

        class SteeperLog(LogAdditiveUtility):
            pass

        original = _FAMILIES[UtilityFamily.LOG_ADDITIVE]
        try:
            register_family(UtilityFamily.LOG_ADDITIVE, SteeperLog)
            assert isinstance(make_utility("log_additive"), SteeperLog)
        finally:
            register_family(UtilityFamily.LOG_ADDITIVE, original)

    def test_register_rejects_non_utility(self) -> None:
        """Test that only BiUtility subclasses can be registered."""
        with pytest.raises(TypeError, match="subclass of BiUtility"):
            register_family(UtilityFamily.QUADRATIC, dict)
