"""Convergence studies of the Taylor predictions and the CARA-CRRA two-source threshold."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from mixrisk.base import DomainBox
from mixrisk.errors import ConfigurationError
from mixrisk.fuzzy import RectangularFuzzyNumber
from mixrisk.indicators import INDICATORS, IndicatorKind, ModelKind, Sign, sign_of
from mixrisk.solver import (
    PrecautionaryReport,
    SavingScenario,
    lifetime_utility_derivative,
    precautionary_report,
    solve_optimal_saving,
)
from mixrisk.stochastic import UniformRandomVariable
from mixrisk.taylor import TaylorGapResult, derivative_gap
from mixrisk.utilities import CaraCrraProductUtility

logger = logging.getLogger(__name__)

DEFAULT_EPSILONS = (0.1, 0.05, 0.025)
# Errors below this multiple of |v_1| are roundoff; no order is estimated from them.
ERROR_FLOOR = 1e-13
THRESHOLD_RELATIVE_TIE = 1e-12


@dataclass(frozen=True)
class ScalingStudy:
    """Taylor errors per indicator along a decreasing sequence of risk scales."""

    model: ModelKind
    epsilons: Tuple[float, ...]
    rows: Tuple[TaylorGapResult, ...]
    floors: Tuple[float, ...]

    def errors(self, kind: IndicatorKind) -> Tuple[float, ...]:
        return tuple(row.absolute_error for row in self.rows if row.kind is kind)

    def orders(self, kind: IndicatorKind) -> Tuple[Optional[float], ...]:
        """
        Empirical order log(e_i / e_{i+1}) / log(eps_i / eps_{i+1}) per consecutive pair.

        None where either error is at roundoff level.
        """
        errors = self.errors(kind)
        orders = []
        for i in range(len(errors) - 1):
            if errors[i] <= self.floors[i] or errors[i + 1] <= self.floors[i + 1]:
                orders.append(None)
                continue
            ratio = math.log(errors[i] / errors[i + 1])
            orders.append(ratio / math.log(self.epsilons[i] / self.epsilons[i + 1]))
        return tuple(orders)

    def monotone(self, kind: IndicatorKind) -> bool:
        errors = self.errors(kind)
        return all(later <= earlier for earlier, later in zip(errors, errors[1:]))

    def kinds(self) -> Tuple[IndicatorKind, ...]:
        return INDICATORS[self.model]


def _check_epsilons(epsilons: Sequence[float]) -> Tuple[float, ...]:
    values = tuple(float(e) for e in epsilons)
    if len(values) < 2:
        raise ConfigurationError("an epsilon study needs at least two risk scales")
    if any(e <= 0 for e in values):
        raise ConfigurationError(f"risk scales must be positive, got {values}")
    if any(later >= earlier for earlier, later in zip(values, values[1:])):
        raise ConfigurationError(f"risk scales must be strictly decreasing, got {values}")
    return values


def epsilon_scaling_study(
    scenario: SavingScenario,
    epsilons: Iterable[float] = DEFAULT_EPSILONS,
    kinds: Optional[Sequence[IndicatorKind]] = None,
) -> ScalingStudy:
    """
    Compare exact and Taylor-predicted baseline derivatives as risks shrink.

    For each scale the risks are scaled about their means, the full-risk problem is
    solved, and at its optimum s* the exact gap (baseline derivative minus full-risk
    derivative, both by quadrature) is compared with :func:`derivative_gap`.

    Args:
        scenario: Base scenario; its situation is ignored
        epsilons: Positive, strictly decreasing risk scales
        kinds: Indicators to study (default: all for the model)

    Returns:
        ScalingStudy with one row per (epsilon, indicator)

    Raises:
        ConfigurationError: If the scales are not positive and decreasing
    """
    values = _check_epsilons(list(epsilons))
    kinds = tuple(kinds) if kinds else INDICATORS[scenario.model]
    rows = []
    floors = []
    for epsilon in values:
        full = scenario.scaled(epsilon).with_situation(None)
        s_star = solve_optimal_saving(full).s_opt
        means = (full.income_mean, full.background_mean)
        variances = (full.income_variance, full.background_variance)
        full_derivative = lifetime_utility_derivative(full, s_star)
        v_1 = float(full.v.partial((1,), means[0] + s_star, means[1]))
        floors.append(ERROR_FLOOR * max(1.0, abs(v_1)))
        for kind in kinds:
            baseline = full.with_situation(kind.baseline)
            exact = lifetime_utility_derivative(baseline, s_star) - full_derivative
            predicted = derivative_gap(full.model, kind, full.v, s_star, means, variances)
            rows.append(TaylorGapResult(kind, epsilon, s_star, exact, predicted))
            logger.debug(
                "eps=%g %s: exact=%.6e predicted=%.6e", epsilon, kind.value, exact, predicted
            )
    return ScalingStudy(scenario.model, values, tuple(rows), tuple(floors))


@dataclass(frozen=True)
class ThresholdReport:
    """
    Two-source condition for v = CARA in income times CRRA in background, with a
    rectangular fuzzy income risk and a uniform background risk on the same [c, d].
    """

    alpha: float
    gamma: float
    c: float
    d: float
    var_fuzzy: float
    var_random: float
    lhs: float
    rhs: float
    midpoint_rhs: float
    threshold_sum: float
    combination: float
    evaluation_point: Tuple[float, float]
    report: Optional[PrecautionaryReport] = None

    @property
    def predicate_sign(self) -> Sign:
        """Sign of alpha^2 / (gamma (1 - gamma)) - 4 / (3 (c + d)^2)."""
        tie = THRESHOLD_RELATIVE_TIE * max(abs(self.lhs), abs(self.rhs))
        return sign_of(self.lhs - self.rhs, tie)

    @property
    def solved_two_source(self) -> Optional[float]:
        if self.report is None:
            return None
        return self.report.indicator(IndicatorKind.TWO_SOURCE).value

    @property
    def agreement(self) -> Optional[bool]:
        """Solved two_source sign versus the threshold predicate; None without a solve."""
        if self.report is None:
            return None
        return self.report.indicator(IndicatorKind.TWO_SOURCE).sign is self.predicate_sign


def _threshold_utility(alpha: float, gamma: float, c: float, d: float) -> CaraCrraProductUtility:
    domain = DomainBox(-10.0, 10.0, min(0.01, 0.5 * c), max(10.0, 2.0 * d))
    return CaraCrraProductUtility(alpha, gamma, domain)


def cara_crra_threshold_report(
    alpha: float,
    gamma: float,
    c: float,
    d: float,
    template: Optional[SavingScenario] = None,
) -> ThresholdReport:
    """
    Evaluate the closed-form two-source condition and optionally solve the model.

    With Var(f, A) = (d - c)^2 / 4 and Var(X) = (d - c)^2 / 12 the two-source
    predicate at (y, (c + d) / 2) is (d - c)^2 / 4 * [v_111 + v_122 / 3], which is
    non-negative iff alpha^2 / (gamma (1 - gamma)) >= 4 / (3 (c + d)^2), i.e.
    iff c + d >= (2 / alpha) sqrt(gamma (1 - gamma) / 3).

    Args:
        alpha: Absolute risk aversion in income (> 0)
        gamma: Relative curvature in background, in (0, 1)
        c: Lower end of both supports (> 0)
        d: Upper end (> c)
        template: Scenario supplying u, y0, x0 and settings; when given the
            mixed-I model is solved and its two_source indicator attached

    Raises:
        ConfigurationError: If a parameter is out of range
    """
    if not alpha > 0:
        raise ConfigurationError(f"alpha must be positive, got {alpha}")
    if not 0 < gamma < 1:
        raise ConfigurationError(f"gamma must lie in (0, 1), got {gamma}")
    if not 0 < c < d:
        raise ConfigurationError(f"need 0 < c < d, got c={c}, d={d}")

    spread = d - c
    midpoint = 0.5 * (c + d)
    var_fuzzy = spread**2 / 4.0
    var_random = spread**2 / 12.0
    lhs = alpha**2 / (gamma * (1.0 - gamma))
    rhs = 4.0 / (3.0 * (c + d) ** 2)
    midpoint_rhs = 1.0 / (3.0 * midpoint**2)
    threshold_sum = (2.0 / alpha) * math.sqrt(gamma * (1.0 - gamma) / 3.0)

    report = None
    y = 0.0
    v = _threshold_utility(alpha, gamma, c, d)
    if template is not None:
        v = CaraCrraProductUtility(alpha, gamma, template.v.domain)
        scenario = replace(
            template,
            model=ModelKind.MIXED_I,
            v=v,
            income_risk=RectangularFuzzyNumber(c, d),
            background_risk=UniformRandomVariable(c, d),
            situation=None,
            bounds=None,
            override_v_assumptions=True,
        )
        report = precautionary_report(scenario)
        y = report.evaluation_point[0]

    point = (y, midpoint)
    combination = var_fuzzy * (
        float(v.partial((1, 1, 1), *point)) + float(v.partial((1, 2, 2), *point)) / 3.0
    )
    if not np.isclose(rhs, midpoint_rhs, rtol=1e-12, atol=0.0):
        logger.warning("midpoint form %.17g differs from %.17g", midpoint_rhs, rhs)

    return ThresholdReport(
        alpha=alpha,
        gamma=gamma,
        c=c,
        d=d,
        var_fuzzy=var_fuzzy,
        var_random=var_random,
        lhs=lhs,
        rhs=rhs,
        midpoint_rhs=midpoint_rhs,
        threshold_sum=threshold_sum,
        combination=combination,
        evaluation_point=point,
        report=report,
    )


def threshold_parameters(scenario: SavingScenario) -> Optional[Dict[str, float]]:
    """alpha, gamma, c, d when the scenario has the CARA-CRRA threshold structure, else None."""
    v = scenario.v
    income, background = scenario.income_risk, scenario.background_risk
    if scenario.model is not ModelKind.MIXED_I or not isinstance(v, CaraCrraProductUtility):
        return None
    if not isinstance(income, RectangularFuzzyNumber):
        return None
    if not isinstance(background, UniformRandomVariable):
        return None
    if (income.c, income.d) != (background.c, background.d) or not 0 < v.gamma < 1:
        return None
    if not 0 < income.c < income.d:
        return None
    return {"alpha": v.alpha, "gamma": v.gamma, "c": income.c, "d": income.d}
