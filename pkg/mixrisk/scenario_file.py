"""Strict JSON scenario documents: parsing, validation and canonical serialization."""

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from mixrisk.base import (
    BiUtility,
    DomainBox,
    FuzzyNumber,
    RandomVariable,
    ScaledUtility,
    WeightingFunction,
)
from mixrisk.errors import (
    ConfigurationError,
    ScenarioSchemaError,
    ScenarioSemanticError,
    ScenarioSyntaxError,
)
from mixrisk.fuzzy import (
    ConstantFuzzyNumber,
    PowerWeighting,
    RectangularFuzzyNumber,
    SampledFuzzyNumber,
    TabulatedWeighting,
    TrapezoidalFuzzyNumber,
    TriangularFuzzyNumber,
)
from mixrisk.indicators import ModelKind
from mixrisk.quadrature import QuadratureSettings, default_node_count
from mixrisk.solver import SavingScenario, SolverSettings
from mixrisk.stochastic import (
    DegenerateRandomVariable,
    DiscreteRandomVariable,
    UniformRandomVariable,
)
from mixrisk.utility import UtilityFamily, make_utility

FORMAT_VERSION = 1
_MISSING = object()


class ReportKind(Enum):
    """Outputs a scenario file can request."""

    TABLE = "table"
    CSV = "csv"
    COMPARISON = "comparison"


@dataclass(frozen=True)
class OutputSettings:
    reports: Tuple[ReportKind, ...] = (ReportKind.TABLE,)
    csv_path: Optional[str] = None


@dataclass(frozen=True)
class ScenarioFile:
    """A parsed scenario document."""

    scenario: SavingScenario
    outputs: OutputSettings = field(default_factory=OutputSettings)
    format_version: int = FORMAT_VERSION


class _Section:
    """A JSON object being consumed key by key; leftovers are unknown keys."""

    def __init__(self, data: Any, path: str) -> None:
        if not isinstance(data, dict):
            raise ScenarioSchemaError(f"expected an object, got {_json_type(data)}", path)
        self.data = dict(data)
        self.path = path

    def child(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def has(self, key: str) -> bool:
        return key in self.data

    def raw(self, key: str, default: Any = _MISSING) -> Any:
        if key not in self.data:
            if default is _MISSING:
                raise ScenarioSchemaError("missing required key", self.child(key))
            return default
        return self.data.pop(key)

    def _typed(self, key: str, default: Any) -> Tuple[bool, Any]:
        if key not in self.data and default is not _MISSING:
            return False, default
        return True, self.raw(key)

    def _mistyped(self, key: str, expected: str, value: Any) -> ScenarioSchemaError:
        message = f"expected {expected}, got {_json_type(value)}"
        return ScenarioSchemaError(message, self.child(key))

    def number(self, key: str, default: Any = _MISSING) -> Any:
        present, value = self._typed(key, default)
        return _as_float(value, self.child(key)) if present else value

    def integer(self, key: str, default: Any = _MISSING) -> Any:
        present, value = self._typed(key, default)
        if present and (isinstance(value, bool) or not isinstance(value, int)):
            raise self._mistyped(key, "an integer", value)
        return value

    def boolean(self, key: str, default: Any = _MISSING) -> Any:
        present, value = self._typed(key, default)
        if present and not isinstance(value, bool):
            raise self._mistyped(key, "true or false", value)
        return value

    def string(self, key: str, default: Any = _MISSING) -> Any:
        present, value = self._typed(key, default)
        if present and not isinstance(value, str) and not (value is None and default is None):
            raise self._mistyped(key, "a string", value)
        return value

    def numbers(self, key: str, default: Any = _MISSING) -> Any:
        present, value = self._typed(key, default)
        if not present or (value is None and default is None):
            return value
        if not isinstance(value, list):
            raise self._mistyped(key, "an array", value)
        return tuple(_as_float(item, f"{self.child(key)}[{i}]") for i, item in enumerate(value))

    def section(self, key: str, default: Any = _MISSING) -> "_Section":
        return _Section(self.raw(key, default), self.child(key))

    def finish(self) -> None:
        if self.data:
            key = sorted(self.data)[0]
            raise ScenarioSchemaError("unknown key", self.child(key))


def _json_type(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "array"
    return "object"


def _as_float(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioSchemaError(f"expected a number, got {_json_type(value)}", path)
    return float(value)


def _semantic(path: str, build: Any, *args: Any, **kwargs: Any) -> Any:
    try:
        return build(*args, **kwargs)
    except ConfigurationError as exc:
        raise ScenarioSemanticError(str(exc), path) from exc


def _parse_weighting(section: _Section) -> WeightingFunction:
    if section.has("gammas") or section.has("densities"):
        gammas = section.numbers("gammas")
        densities = section.numbers("densities")
        section.finish()
        return _semantic(section.path, TabulatedWeighting, gammas, densities)
    exponent = section.number("exponent", 1.0)
    section.finish()
    return _semantic(section.path, PowerWeighting, exponent)


def _parse_domain(section: _Section) -> DomainBox:
    box = (
        section.number("y_min"),
        section.number("y_max"),
        section.number("x_min"),
        section.number("x_max"),
    )
    section.finish()
    return _semantic(section.path, DomainBox, *box)


def _parse_utility(section: _Section) -> Tuple[BiUtility, bool]:
    family = section.string("family")
    if family == UtilityFamily.USER_TABULATED.value:
        raise ScenarioSemanticError(
            "user_tabulated utilities can only be built in Python", section.child("family")
        )
    params_section = section.section("parameters", {})
    parameters = {key: params_section.number(key) for key in sorted(params_section.data)}
    domain = None
    if section.has("domain"):
        domain = _parse_domain(section.section("domain"))
    override = section.boolean("monotonicity_override", False)
    scale = section.number("scale", 1.0)
    section.finish()
    utility = _semantic(section.path, make_utility, family, domain, scale, **parameters)
    return utility, override


_FUZZY_SHAPES: Dict[str, Tuple[type, Tuple[str, ...]]] = {
    "rectangular": (RectangularFuzzyNumber, ("c", "d")),
    "triangular": (TriangularFuzzyNumber, ("center", "left", "right")),
    "trapezoidal": (TrapezoidalFuzzyNumber, ("core_low", "core_high", "left", "right")),
    "constant": (ConstantFuzzyNumber, ("value",)),
    "sampled": (SampledFuzzyNumber, ("gammas", "lower", "upper")),
}

_DISTRIBUTIONS: Dict[str, Tuple[type, Tuple[str, ...]]] = {
    "uniform": (UniformRandomVariable, ("c", "d")),
    "discrete": (DiscreteRandomVariable, ("points", "probabilities")),
    "degenerate": (DegenerateRandomVariable, ("value",)),
}

_ARRAY_FIELDS = {"gammas", "lower", "upper", "points", "probabilities"}


def _parse_risk(section: _Section) -> Any:
    kind = section.string("type")
    if kind == "fuzzy":
        name_key, table = "shape", _FUZZY_SHAPES
    elif kind == "random":
        name_key, table = "distribution", _DISTRIBUTIONS
    else:
        raise ScenarioSchemaError(
            f"risk type must be 'fuzzy' or 'random', got {kind!r}", section.child("type")
        )
    name = section.string(name_key)
    if name not in table:
        valid = ", ".join(sorted(table))
        raise ScenarioSchemaError(
            f"unknown {name_key} {name!r}; valid: {valid}", section.child(name_key)
        )
    risk_class, keys = table[name]
    args = [section.numbers(k) if k in _ARRAY_FIELDS else section.number(k) for k in keys]
    section.finish()
    return _semantic(section.path, risk_class, *args)


def _parse_solver(section: _Section) -> Tuple[SolverSettings, Optional[Tuple[float, float]]]:
    tolerance = section.number("tolerance", 1e-10)
    bounds = section.numbers("bounds", None)
    nodes = section.integer("quadrature_nodes", _semantic(section.path, default_node_count))
    quad_tolerance = section.number("quadrature_tolerance", 1e-9)
    max_iterations = section.integer("max_iterations", 200)
    max_expansions = section.integer("max_expansions", 30)
    margin = section.number("margin", 1e-6)
    section.finish()
    if bounds is not None and len(bounds) != 2:
        raise ScenarioSchemaError("bounds must have two entries", section.child("bounds"))
    quadrature = _semantic(
        section.child("quadrature_nodes"), QuadratureSettings, nodes, quad_tolerance
    )
    settings = _semantic(
        section.path,
        SolverSettings,
        tolerance,
        quadrature,
        max_iterations,
        max_expansions,
        margin,
    )
    return settings, (bounds[0], bounds[1]) if bounds is not None else None


def _parse_outputs(section: _Section) -> OutputSettings:
    raw_reports = section.raw("reports", ["table"])
    if not isinstance(raw_reports, list):
        raise ScenarioSchemaError(
            f"expected an array, got {_json_type(raw_reports)}", section.child("reports")
        )
    reports = []
    for i, item in enumerate(raw_reports):
        try:
            reports.append(ReportKind(item))
        except ValueError:
            valid = ", ".join(k.value for k in ReportKind)
            raise ScenarioSchemaError(
                f"unknown report kind {item!r}; valid: {valid}", f"{section.child('reports')}[{i}]"
            )
    csv_path = section.string("csv_path", None)
    section.finish()
    return OutputSettings(tuple(reports), csv_path)


def _check_risk_kinds(model: ModelKind, income: Any, background: Any) -> None:
    fuzzy_income = model is ModelKind.MIXED_I
    fuzzy_background = model is ModelKind.MIXED_II
    for path, risk, fuzzy in (
        ("income_risk", income, fuzzy_income),
        ("background_risk", background, fuzzy_background),
    ):
        if fuzzy and not isinstance(risk, FuzzyNumber):
            raise ScenarioSemanticError(f"model {model.value} needs a fuzzy risk here", path)
        if not fuzzy and not isinstance(risk, RandomVariable):
            raise ScenarioSemanticError(f"model {model.value} needs a random risk here", path)


def parse_scenario_file(text: str) -> ScenarioFile:
    """
    Parse and validate a scenario document.

    Args:
        text: JSON document

    Returns:
        ScenarioFile with every default filled in

    Raises:
        TypeError: If text is not a string
        ScenarioSyntaxError: Malformed JSON, with line and column
        ScenarioSchemaError: Unknown, missing or mistyped keys, with the key path
        ScenarioSemanticError: Values violating a model invariant, with the key path
    """
    if not isinstance(text, str):
        raise TypeError(f"Expected string input, got {type(text).__name__}")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioSyntaxError(e.msg, e.lineno, e.colno)

    root = _Section(document, "")
    version = root.integer("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ScenarioSchemaError(f"unsupported format version {version}", "format_version")
    model_name = root.string("model")
    try:
        model = ModelKind(model_name)
    except ValueError:
        valid = ", ".join(m.value for m in ModelKind)
        raise ScenarioSchemaError(f"unknown model {model_name!r}; valid: {valid}", "model")

    weighting = _parse_weighting(root.section("weighting", {}))
    endowment = root.section("endowment")
    y0 = endowment.number("y0")
    x0 = endowment.number("x0")
    endowment.finish()
    u, override_u = _parse_utility(root.section("utility_u"))
    v, override_v = _parse_utility(root.section("utility_v"))
    income = _parse_risk(root.section("income_risk"))
    background = _parse_risk(root.section("background_risk"))
    settings, bounds = _parse_solver(root.section("solver", {}))
    outputs = _parse_outputs(root.section("outputs", {}))
    root.finish()

    _check_risk_kinds(model, income, background)
    scenario = _semantic(
        "scenario",
        SavingScenario,
        model=model,
        y0=y0,
        x0=x0,
        u=u,
        v=v,
        income_risk=income,
        background_risk=background,
        weighting=weighting,
        bounds=bounds,
        settings=settings,
        override_u_assumptions=override_u,
        override_v_assumptions=override_v,
    )
    return ScenarioFile(scenario, outputs, version)


def _dump_weighting(weighting: WeightingFunction) -> Dict[str, Any]:
    if isinstance(weighting, PowerWeighting):
        return {"exponent": float(weighting.exponent)}
    if isinstance(weighting, TabulatedWeighting):
        return {"gammas": list(weighting.gammas), "densities": list(weighting.densities)}
    raise ConfigurationError(f"cannot serialize weighting {type(weighting).__name__}")


def _dump_utility(utility: BiUtility, override: bool) -> Dict[str, Any]:
    scale = 1.0
    if isinstance(utility, ScaledUtility):
        scale = utility.factor
        utility = utility.base
    if utility.family == UtilityFamily.USER_TABULATED.value:
        raise ConfigurationError("user_tabulated utilities cannot be serialized")
    box = utility.domain
    return {
        "family": utility.family,
        "parameters": {k: float(v) for k, v in utility.parameters().items()},
        "domain": {"y_min": box.y_min, "y_max": box.y_max, "x_min": box.x_min, "x_max": box.x_max},
        "monotonicity_override": override,
        "scale": float(scale),
    }


def _dump_risk(risk: Any) -> Dict[str, Any]:
    for kind, name_key, table in (
        ("fuzzy", "shape", _FUZZY_SHAPES),
        ("random", "distribution", _DISTRIBUTIONS),
    ):
        for name, (risk_class, keys) in table.items():
            if type(risk) is risk_class:
                entry: Dict[str, Any] = {"type": kind, name_key: name}
                for key in keys:
                    value = getattr(risk, key)
                    entry[key] = [float(x) for x in value] if key in _ARRAY_FIELDS else float(value)
                return entry
    raise ConfigurationError(f"cannot serialize risk {type(risk).__name__}")


def scenario_document(scenario_file: ScenarioFile) -> Dict[str, Any]:
    """The fully defaulted JSON object for a scenario file."""
    scenario = scenario_file.scenario
    settings = scenario.settings
    outputs = scenario_file.outputs
    bounds: Optional[List[float]] = None
    if scenario.bounds is not None:
        bounds = [float(scenario.bounds[0]), float(scenario.bounds[1])]
    return {
        "format_version": scenario_file.format_version,
        "model": scenario.model.value,
        "weighting": _dump_weighting(scenario.weighting),
        "endowment": {"y0": float(scenario.y0), "x0": float(scenario.x0)},
        "utility_u": _dump_utility(scenario.u, scenario.override_u_assumptions),
        "utility_v": _dump_utility(scenario.v, scenario.override_v_assumptions),
        "income_risk": _dump_risk(scenario.income_risk),
        "background_risk": _dump_risk(scenario.background_risk),
        "solver": {
            "tolerance": settings.tolerance,
            "bounds": bounds,
            "quadrature_nodes": settings.quadrature.nodes,
            "quadrature_tolerance": settings.quadrature.tolerance,
            "max_iterations": settings.max_iterations,
            "max_expansions": settings.max_expansions,
            "margin": settings.margin,
        },
        "outputs": {
            "reports": [kind.value for kind in outputs.reports],
            "csv_path": outputs.csv_path,
        },
    }


def serialize_scenario_file(scenario_file: ScenarioFile) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(scenario_document(scenario_file), sort_keys=True, indent=2) + "\n"
