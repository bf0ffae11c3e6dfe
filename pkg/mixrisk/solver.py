"""Two-period optimal saving under mixed risk and the precautionary indicators."""

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from mixrisk.base import BiUtility, FuzzyNumber, RandomVariable, WeightingFunction
from mixrisk.errors import (
    ConfigurationError,
    DomainError,
    MixRiskError,
    ModelAssumptionError,
    NoInteriorOptimumError,
    NumericalError,
)
from mixrisk.fuzzy import PowerWeighting, possibilistic_mean, possibilistic_variance
from mixrisk.indicators import (
    INDICATORS,
    SITUATIONS,
    IndicatorKind,
    ModelKind,
    Sign,
    Situation,
    as_model_kind,
    predicate_sign,
    predicate_value,
    sign_of,
)
from mixrisk.mixed import Side, expected_value
from mixrisk.quadrature import QuadratureSettings
from mixrisk.stochastic import DegenerateRandomVariable, UniformRandomVariable
from mixrisk.taylor import derivative_gap
from mixrisk.utility import validate_utility, validation_grid

logger = logging.getLogger(__name__)

Risk = Union[FuzzyNumber, RandomVariable]

BRENT_XTOL = 1e-14
BRENT_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class SolverSettings:
    """
    Root-finding settings.

    Args:
        tolerance: Accepted |V'(s_opt)| relative to max(1, |u_1|)
        quadrature: Settings for every expectation
        max_iterations: Root-finder iteration cap
        max_expansions: Bracket doublings before giving up
        margin: Distance kept from the edge of the domain-feasible interval
    """

    tolerance: float = 1e-10
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings)
    max_iterations: int = 200
    max_expansions: int = 30
    margin: float = 1e-6

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ConfigurationError(f"solver tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1 or self.max_expansions < 0:
            raise ConfigurationError("iteration and expansion limits must be non-negative")
        if self.margin < 0:
            raise ConfigurationError(f"margin must be non-negative, got {self.margin}")

    @property
    def tie_tolerance(self) -> float:
        """Indicators smaller than this are reported as zero."""
        return 10.0 * self.tolerance


def _support(risk: Risk) -> Tuple[float, float]:
    return risk.support()


@dataclass(frozen=True)
class SavingScenario:
    """
    A saving problem: endowments, utilities, the two risks and solver settings.

    ``situation`` selects which risks are present for single solves; None means
    full risk. The report functions solve every situation themselves. ``bounds``
    is the initial bracket; the solver may widen it up to the feasible interval.
    """

    model: ModelKind
    y0: float
    x0: float
    u: BiUtility
    v: BiUtility
    income_risk: Risk
    background_risk: Risk
    weighting: WeightingFunction = field(default_factory=PowerWeighting)
    situation: Optional[Situation] = None
    bounds: Optional[Tuple[float, float]] = None
    settings: SolverSettings = field(default_factory=SolverSettings)
    override_u_assumptions: bool = False
    override_v_assumptions: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "model", as_model_kind(self.model))
        if not isinstance(self.u, BiUtility) or not isinstance(self.v, BiUtility):
            raise TypeError("u and v must be BiUtility instances")
        if not isinstance(self.weighting, WeightingFunction):
            raise TypeError("weighting must be a WeightingFunction")
        self._check_risk_kinds()
        feasible_lo, feasible_hi = self.feasible_interval()
        if self.bounds is not None:
            lo, hi = self.bounds
            if not lo < hi:
                raise ConfigurationError(f"saving bounds need s_lo < s_hi, got {self.bounds}")
            if lo < feasible_lo or hi > feasible_hi:
                raise ConfigurationError(
                    f"saving bounds [{lo}, {hi}] leave the utility domains; "
                    f"feasible saving is [{feasible_lo:.6g}, {feasible_hi:.6g}]"
                )

    def _check_risk_kinds(self) -> None:
        expected = {
            ModelKind.PROBABILISTIC: (RandomVariable, RandomVariable),
            ModelKind.MIXED_I: (FuzzyNumber, RandomVariable),
            ModelKind.MIXED_II: (RandomVariable, FuzzyNumber),
        }[self.model]
        for name, risk, kind in zip(
            ("income_risk", "background_risk"),
            (self.income_risk, self.background_risk),
            expected,
        ):
            if not isinstance(risk, kind):
                raise ConfigurationError(
                    f"{name}: model {self.model.value} needs a "
                    f"{'fuzzy number' if kind is FuzzyNumber else 'random variable'}, "
                    f"got {type(risk).__name__}"
                )

    def _mean(self, risk: Risk) -> float:
        if isinstance(risk, FuzzyNumber):
            return possibilistic_mean(self.weighting, risk, self.settings.quadrature)
        return risk.mean()

    def _variance(self, risk: Risk) -> float:
        if isinstance(risk, FuzzyNumber):
            return possibilistic_variance(self.weighting, risk, self.settings.quadrature)
        return risk.variance()

    @cached_property
    def income_mean(self) -> float:
        return self._mean(self.income_risk)

    @cached_property
    def background_mean(self) -> float:
        return self._mean(self.background_risk)

    @cached_property
    def income_variance(self) -> float:
        return self._variance(self.income_risk)

    @cached_property
    def background_variance(self) -> float:
        return self._variance(self.background_risk)

    def sides(self, situation: Optional[Situation] = None) -> Tuple[Side, Side]:
        """Income and background sides for a situation; absent risks sit at their means."""
        situation = situation or self.situation or Situation.FULL_RISK
        income: Side = self.income_risk if situation.risky_income else self.income_mean
        background: Side = (
            self.background_risk if situation.risky_background else self.background_mean
        )
        return income, background

    def with_situation(self, situation: Optional[Situation]) -> "SavingScenario":
        return replace(self, situation=situation)

    def scaled(self, epsilon: float) -> "SavingScenario":
        """Scale both risks about their means by ``epsilon`` (bounds are dropped)."""
        if not epsilon > 0:
            raise ConfigurationError(f"risk scale must be positive, got {epsilon}")
        return replace(
            self,
            income_risk=self.income_risk.scaled_about(self.income_mean, epsilon),
            background_risk=self.background_risk.scaled_about(self.background_mean, epsilon),
            bounds=None,
        )

    def feasible_interval(self) -> Tuple[float, float]:
        """
        Saving levels keeping (y0 - s, x0) in u's domain and y + s in v's domain.

        Raises:
            ConfigurationError: If no saving level is feasible or the background
                risk leaves v's domain
        """
        u_box, v_box = self.u.domain, self.v.domain
        income_lo, income_hi = _support(self.income_risk)
        background_lo, background_hi = _support(self.background_risk)
        if not (u_box.x_min <= self.x0 <= u_box.x_max):
            raise ConfigurationError(f"x0={self.x0} is outside u's domain")
        if background_lo < v_box.x_min or background_hi > v_box.x_max:
            raise ConfigurationError(
                f"background_risk support [{background_lo:g}, {background_hi:g}] "
                f"leaves v's domain [{v_box.x_min:g}, {v_box.x_max:g}]"
            )
        lo = max(self.y0 - u_box.y_max, v_box.y_min - income_lo)
        hi = min(self.y0 - u_box.y_min, v_box.y_max - income_hi)
        if not lo < hi:
            raise ConfigurationError(
                "no saving level keeps both periods inside the utility domains"
            )
        return lo, hi

    def expansion_limits(self) -> Tuple[float, float]:
        """The feasible interval shrunk by the solver margin."""
        lo, hi = self.feasible_interval()
        margin = self.settings.margin
        if not lo + margin < hi - margin:
            raise ConfigurationError("feasible saving interval is narrower than the margin")
        return lo + margin, hi - margin

    def admissible_interval(self) -> Tuple[float, float]:
        """User bounds, or the feasible interval shrunk by the solver margin."""
        if self.bounds is not None:
            return float(self.bounds[0]), float(self.bounds[1])
        return self.expansion_limits()

    def check_assumptions(self) -> None:
        """
        Run utility admissibility checks, honouring the override flags.

        Raises:
            ModelAssumptionError: If u or v fails a check without an override
        """
        for name, utility, override in (
            ("u", self.u, self.override_u_assumptions),
            ("v", self.v, self.override_v_assumptions),
        ):
            report = validate_utility(utility)
            if report.passed:
                continue
            failed = ", ".join(report.failures())
            if not override:
                raise ModelAssumptionError(
                    f"utility {name} ({utility.family}) fails: {failed}; "
                    f"set the override flag to accept it"
                )
            logger.warning("utility %s (%s) accepted despite: %s", name, utility.family, failed)


@dataclass(frozen=True)
class SavingSolution:
    situation: Situation
    s_opt: float
    objective: float
    foc_residual: float
    second_derivative: float
    iterations: int
    bracket: Tuple[float, float]


def _require_feasible(scenario: SavingScenario, s: float) -> None:
    lo, hi = scenario.feasible_interval()
    if not lo <= s <= hi:
        raise DomainError(
            f"saving s={s:.6g} is outside the feasible interval [{lo:.6g}, {hi:.6g}]"
        )


def _second_period(scenario: SavingScenario, index: Tuple[int, ...], s: float) -> float:
    income, background = scenario.sides()
    v = scenario.v
    if index:
        g = lambda y, x: v.partial(index, y + s, x)  # noqa: E731
    else:
        g = lambda y, x: v(y + s, x)  # noqa: E731
    return expected_value(
        scenario.weighting, g, income, background, scenario.settings.quadrature, "second period"
    )


def lifetime_utility(scenario: SavingScenario, s: float) -> float:
    """
    u(y0 - s, x0) plus the expected second-period utility for the scenario's situation.

    User ``bounds`` only seed the solver's bracket, so any s in the domain-feasible
    interval is accepted, inside the bounds or not.

    Raises:
        DomainError: If s is outside the feasible interval
    """
    _require_feasible(scenario, s)
    return float(scenario.u(scenario.y0 - s, scenario.x0)) + _second_period(scenario, (), s)


def lifetime_utility_derivative(scenario: SavingScenario, s: float) -> float:
    """-u_1(y0 - s, x0) plus the expected v_1; v_1 is analytic under the integral."""
    _require_feasible(scenario, s)
    u_1 = float(scenario.u.partial((1,), scenario.y0 - s, scenario.x0))
    return -u_1 + _second_period(scenario, (1,), s)


def lifetime_utility_second_derivative(scenario: SavingScenario, s: float) -> float:
    _require_feasible(scenario, s)
    u_11 = float(scenario.u.partial((1, 1), scenario.y0 - s, scenario.x0))
    return u_11 + _second_period(scenario, (1, 1), s)


def _describe(value: float) -> str:
    return "positive" if value > 0 else "negative" if value < 0 else "zero"


def _bracket(scenario: SavingScenario) -> Tuple[float, float, float, float]:
    # Widen [lo, hi] until V' changes sign; V' is strictly decreasing.
    settings = scenario.settings
    lo, hi = scenario.admissible_interval()
    limit_lo, limit_hi = scenario.expansion_limits()
    limit_lo, limit_hi = min(limit_lo, lo), max(limit_hi, hi)
    d_lo = lifetime_utility_derivative(scenario, lo)
    d_hi = lifetime_utility_derivative(scenario, hi)
    expansions = 0
    while d_lo * d_hi > 0:
        width = hi - lo
        if d_lo > 0:
            new_lo, new_hi = hi, min(limit_hi, hi + 2.0 * width)
        else:
            new_lo, new_hi = max(limit_lo, lo - 2.0 * width), lo
        if expansions >= settings.max_expansions or (new_lo, new_hi) == (lo, hi) or not (
            new_lo < new_hi
        ):
            raise NoInteriorOptimumError(
                f"V' does not change sign on [{lo:.6g}, {hi:.6g}]: "
                f"V'(s_lo) is {_describe(d_lo)}, V'(s_hi) is {_describe(d_hi)}"
            )
        if d_lo > 0:
            lo, d_lo = hi, d_hi
            hi = new_hi
            d_hi = lifetime_utility_derivative(scenario, hi)
        else:
            hi, d_hi = lo, d_lo
            lo = new_lo
            d_lo = lifetime_utility_derivative(scenario, lo)
        expansions += 1
        logger.debug("bracket expanded to [%.6g, %.6g]", lo, hi)
    return lo, hi, d_lo, d_hi


def solve_optimal_saving(scenario: SavingScenario) -> SavingSolution:
    """
    Solve the first-order condition V'(s) = 0 by bracketed Brent iteration.

    Args:
        scenario: The problem; an unset situation means full risk

    Returns:
        SavingSolution

    Raises:
        ModelAssumptionError: If a utility is inadmissible or V''(s_opt) >= 0
        NoInteriorOptimumError: If V' keeps its sign on the widest bracket
        NumericalError: If the residual exceeds the tolerance
    """
    situation = scenario.situation or Situation.FULL_RISK
    problem = scenario.with_situation(situation)
    problem.check_assumptions()
    settings = problem.settings

    lo, hi, d_lo, d_hi = _bracket(problem)
    iterations = 0
    if d_lo == 0:
        s_opt = lo
    elif d_hi == 0:
        s_opt = hi
    else:
        s_opt, info = brentq(
            lambda s: lifetime_utility_derivative(problem, s),
            lo,
            hi,
            xtol=BRENT_XTOL,
            rtol=BRENT_RTOL,
            maxiter=settings.max_iterations,
            full_output=True,
            disp=False,
        )
        iterations = info.iterations
        logger.debug("brentq: %d iterations, %s", info.iterations, info.flag)
        if not info.converged:
            raise NumericalError(
                f"root finder did not converge in {settings.max_iterations} iterations"
            )

    residual = lifetime_utility_derivative(problem, s_opt)
    scale = max(1.0, abs(float(problem.u.partial((1,), problem.y0 - s_opt, problem.x0))))
    if abs(residual) > settings.tolerance * scale:
        raise NumericalError(f"first-order residual too large at s={s_opt:.12g}", abs(residual))

    second = lifetime_utility_second_derivative(problem, s_opt)
    if not second < 0:
        raise ModelAssumptionError(
            f"objective is not strictly concave at s={s_opt:.6g} (V''={second:.6g})"
        )

    solution = SavingSolution(
        situation=situation,
        s_opt=float(s_opt),
        objective=lifetime_utility(problem, s_opt),
        foc_residual=residual,
        second_derivative=second,
        iterations=iterations,
        bracket=(lo, hi),
    )
    logger.info("%s %s: s_opt=%.12g", problem.model.value, situation.value, solution.s_opt)
    return solution


@dataclass(frozen=True)
class IndicatorResult:
    """One precautionary indicator with its predicate and Taylor-predicted gap."""

    kind: IndicatorKind
    value: float
    predicate: float
    predicate_sign: Sign
    taylor_gap: float
    tolerance: float

    @property
    def sign(self) -> Sign:
        return sign_of(self.value, self.tolerance)

    @property
    def agreement(self) -> Optional[bool]:
        """Whether the solved sign matches the predicate; None when the gap is a tie."""
        if abs(self.taylor_gap) <= self.tolerance:
            return None
        return self.sign is self.predicate_sign


@dataclass(frozen=True)
class PrecautionaryReport:
    model: ModelKind
    solutions: Tuple[SavingSolution, ...]
    indicators: Tuple[IndicatorResult, ...]
    evaluation_point: Tuple[float, float]
    var_income: float
    var_background: float
    tolerance: float

    def solution(self, situation: Situation) -> SavingSolution:
        for item in self.solutions:
            if item.situation is situation:
                return item
        raise ConfigurationError(f"situation {situation.value} was not solved")

    def indicator(self, kind: IndicatorKind) -> IndicatorResult:
        for item in self.indicators:
            if item.kind is kind:
                return item
        raise ConfigurationError(f"{kind.value} is not reported for the {self.model.value} model")

    @property
    def consistent(self) -> bool:
        """add_income >= tol and add_background >= tol imply two_source >= -tol."""
        kinds = {item.kind: item.value for item in self.indicators}
        if IndicatorKind.ADD_BACKGROUND not in kinds:
            return True
        tol = self.tolerance
        if kinds[IndicatorKind.ADD_INCOME] >= tol and kinds[IndicatorKind.ADD_BACKGROUND] >= tol:
            return kinds[IndicatorKind.TWO_SOURCE] >= -tol
        return True


def precautionary_report(scenario: SavingScenario) -> PrecautionaryReport:
    """
    Solve every situation of the model and compute the precautionary indicators.

    Predicates and Taylor gaps are evaluated at (income mean + s_full, background
    mean), where s_full is the full-risk optimum.

    Raises:
        MixRiskError: Any solver error, with the failing situation prefixed
    """
    solutions: Dict[Situation, SavingSolution] = {}
    for situation in SITUATIONS[scenario.model]:
        try:
            solutions[situation] = solve_optimal_saving(scenario.with_situation(situation))
        except MixRiskError as exc:
            exc.args = (f"situation {situation.value}: {exc}",)
            raise

    s_full = solutions[Situation.FULL_RISK].s_opt
    means = (scenario.income_mean, scenario.background_mean)
    variances = (scenario.income_variance, scenario.background_variance)
    point = (means[0] + s_full, means[1])
    tolerance = scenario.settings.tie_tolerance

    indicators = []
    for kind in INDICATORS[scenario.model]:
        indicators.append(
            IndicatorResult(
                kind=kind,
                value=s_full - solutions[kind.baseline].s_opt,
                predicate=predicate_value(kind, scenario.v, point, *variances),
                predicate_sign=predicate_sign(kind, scenario.v, point, *variances),
                taylor_gap=derivative_gap(
                    scenario.model, kind, scenario.v, s_full, means, variances
                ),
                tolerance=tolerance,
            )
        )

    report = PrecautionaryReport(
        model=scenario.model,
        solutions=tuple(solutions.values()),
        indicators=tuple(indicators),
        evaluation_point=point,
        var_income=variances[0],
        var_background=variances[1],
        tolerance=tolerance,
    )
    if not report.consistent:
        logger.warning(
            "indicators violate the two-source implication: %s",
            {item.kind.value: item.value for item in indicators},
        )
    return report


@dataclass(frozen=True)
class CorollaryCheck:
    income_predicate: float
    background_predicate: float
    two_source_predicate: float

    @property
    def hypothesis(self) -> bool:
        return self.income_predicate >= 0 and self.background_predicate >= 0

    @property
    def conclusion(self) -> bool:
        return self.two_source_predicate >= 0

    @property
    def violated(self) -> bool:
        return self.hypothesis and not self.conclusion


def corollary_consistency(
    report: PrecautionaryReport,
    utility: BiUtility,
    point: Optional[Tuple[float, float]] = None,
) -> CorollaryCheck:
    """
    Check that non-negative add_income and add_background predicates give a
    non-negative two_source predicate. A violation is logged as an error.
    """
    point = point or report.evaluation_point
    args = (utility, point, report.var_income, report.var_background)
    check = CorollaryCheck(
        income_predicate=predicate_value(IndicatorKind.ADD_INCOME, *args),
        background_predicate=predicate_value(IndicatorKind.ADD_BACKGROUND, *args),
        two_source_predicate=predicate_value(IndicatorKind.TWO_SOURCE, *args),
    )
    if check.violated:
        logger.error("two-source predicate is negative although both hypotheses hold: %s", check)
    return check


def uniform_sign_guarantees(utility: BiUtility, grid_size: int = 11) -> Dict[IndicatorKind, bool]:
    """
    Indicators guaranteed non-negative for any risks, judged on the validation grid.

    v_111 >= 0 everywhere covers add_income, v_122 >= 0 covers add_background and
    both together cover two_source.
    """
    ys, xs = validation_grid(utility.domain, grid_size)
    prudent = bool(np.all(utility.partial((1, 1, 1), ys, xs) >= 0))
    cross = bool(np.all(utility.partial((1, 2, 2), ys, xs) >= 0))
    return {
        IndicatorKind.ADD_INCOME: prudent,
        IndicatorKind.TWO_SOURCE: prudent and cross,
        IndicatorKind.ADD_BACKGROUND: cross,
    }


def _random_counterpart(fuzzy: FuzzyNumber) -> RandomVariable:
    low, high = fuzzy.support()
    core_low, core_high = fuzzy.core()
    if low == high:
        return DegenerateRandomVariable(low)
    if (low, high) != (core_low, core_high):
        raise ConfigurationError(
            "only fuzzy numbers with constant level sets have a probabilistic counterpart"
        )
    return UniformRandomVariable(low, high)


def probabilistic_counterpart(scenario: SavingScenario) -> SavingScenario:
    """
    Replace the fuzzy risk by the random variable on the same support.

    Rectangular fuzzy numbers become uniform distributions, constants become
    degenerate ones.

    Raises:
        ConfigurationError: If the fuzzy risk has no such counterpart
    """
    if scenario.model is ModelKind.PROBABILISTIC:
        return scenario
    income, background = scenario.income_risk, scenario.background_risk
    if isinstance(income, FuzzyNumber):
        income = _random_counterpart(income)
    if isinstance(background, FuzzyNumber):
        background = _random_counterpart(background)
    return replace(
        scenario,
        model=ModelKind.PROBABILISTIC,
        income_risk=income,
        background_risk=background,
    )


@dataclass(frozen=True)
class ModelComparison:
    mixed: PrecautionaryReport
    probabilistic: PrecautionaryReport

    def gap_ratio(self, kind: IndicatorKind) -> Optional[float]:
        """Mixed over probabilistic Taylor gap, None when the latter vanishes."""
        denominator = self.probabilistic.indicator(kind).taylor_gap
        if denominator == 0:
            return None
        return self.mixed.indicator(kind).taylor_gap / denominator


def compare_with_probabilistic(scenario: SavingScenario) -> ModelComparison:
    """Solve the mixed scenario and its probabilistic counterpart side by side."""
    return ModelComparison(
        mixed=precautionary_report(scenario),
        probabilistic=precautionary_report(probabilistic_counterpart(scenario)),
    )
