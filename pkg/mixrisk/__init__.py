"""mixrisk - optimal saving and precautionary indicators under mixed fuzzy/random risk."""

import logging

__version__ = "0.1.0"

from mixrisk.base import (  # noqa: E402
    BiUtility,
    DomainBox,
    FuzzyNumber,
    RandomVariable,
    ScaledUtility,
    WeightingFunction,
)
from mixrisk.errors import (  # noqa: E402
    ConfigurationError,
    DomainError,
    MixRiskError,
    ModelAssumptionError,
    NoInteriorOptimumError,
    NumericalError,
    ScenarioParseError,
    ScenarioSchemaError,
    ScenarioSemanticError,
    ScenarioSyntaxError,
    SolverError,
    UnsupportedDerivativeError,
)
from mixrisk.fuzzy import (  # noqa: E402
    ConstantFuzzyNumber,
    PowerWeighting,
    RectangularFuzzyNumber,
    SampledFuzzyNumber,
    TabulatedWeighting,
    TrapezoidalFuzzyNumber,
    TriangularFuzzyNumber,
    level_set,
    membership,
    possibilistic_expected_utility,
    possibilistic_mean,
    possibilistic_variance,
)
from mixrisk.indicators import (  # noqa: E402
    IndicatorKind,
    ModelKind,
    Sign,
    Situation,
    sign_condition,
)
from mixrisk.mixed import (  # noqa: E402
    MixedVector,
    Orientation,
    mixed_expected_utility,
    mixed_expected_utility_dual,
)
from mixrisk.quadrature import QuadratureSettings  # noqa: E402
from mixrisk.report import emit_csv, render_table, run_report  # noqa: E402
from mixrisk.scenario_file import (  # noqa: E402
    ScenarioFile,
    parse_scenario_file,
    serialize_scenario_file,
)
from mixrisk.solver import (  # noqa: E402
    PrecautionaryReport,
    SavingScenario,
    SavingSolution,
    SolverSettings,
    compare_with_probabilistic,
    corollary_consistency,
    lifetime_utility,
    lifetime_utility_derivative,
    precautionary_report,
    probabilistic_counterpart,
    solve_optimal_saving,
    uniform_sign_guarantees,
)
from mixrisk.stochastic import (  # noqa: E402
    DegenerateRandomVariable,
    DiscreteRandomVariable,
    UniformRandomVariable,
    prob_expect,
    prob_mean,
    prob_variance,
)
from mixrisk.taylor import TaylorScope, derivative_gap, taylor_marginal_approx  # noqa: E402
from mixrisk.utilities import (  # noqa: E402
    CallableUtility,
    CaraAdditiveUtility,
    CaraCrraProductUtility,
    LogAdditiveUtility,
    QuadraticUtility,
)
from mixrisk.utility import (  # noqa: E402
    UtilityFamily,
    make_utility,
    register_family,
    validate_utility,
)
from mixrisk.verification import (  # noqa: E402
    cara_crra_threshold_report,
    epsilon_scaling_study,
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "BiUtility",
    "DomainBox",
    "FuzzyNumber",
    "RandomVariable",
    "ScaledUtility",
    "WeightingFunction",
    "ConfigurationError",
    "DomainError",
    "MixRiskError",
    "ModelAssumptionError",
    "NoInteriorOptimumError",
    "NumericalError",
    "ScenarioParseError",
    "ScenarioSchemaError",
    "ScenarioSemanticError",
    "ScenarioSyntaxError",
    "SolverError",
    "UnsupportedDerivativeError",
    "ConstantFuzzyNumber",
    "PowerWeighting",
    "RectangularFuzzyNumber",
    "SampledFuzzyNumber",
    "TabulatedWeighting",
    "TrapezoidalFuzzyNumber",
    "TriangularFuzzyNumber",
    "level_set",
    "membership",
    "possibilistic_expected_utility",
    "possibilistic_mean",
    "possibilistic_variance",
    "IndicatorKind",
    "ModelKind",
    "Sign",
    "Situation",
    "sign_condition",
    "MixedVector",
    "Orientation",
    "mixed_expected_utility",
    "mixed_expected_utility_dual",
    "QuadratureSettings",
    "emit_csv",
    "render_table",
    "run_report",
    "ScenarioFile",
    "parse_scenario_file",
    "serialize_scenario_file",
    "PrecautionaryReport",
    "SavingScenario",
    "SavingSolution",
    "SolverSettings",
    "compare_with_probabilistic",
    "corollary_consistency",
    "lifetime_utility",
    "lifetime_utility_derivative",
    "precautionary_report",
    "probabilistic_counterpart",
    "solve_optimal_saving",
    "uniform_sign_guarantees",
    "DegenerateRandomVariable",
    "DiscreteRandomVariable",
    "UniformRandomVariable",
    "prob_expect",
    "prob_mean",
    "prob_variance",
    "TaylorScope",
    "derivative_gap",
    "taylor_marginal_approx",
    "CallableUtility",
    "CaraAdditiveUtility",
    "CaraCrraProductUtility",
    "LogAdditiveUtility",
    "QuadraticUtility",
    "UtilityFamily",
    "make_utility",
    "register_family",
    "validate_utility",
    "cara_crra_threshold_report",
    "epsilon_scaling_study",
]
