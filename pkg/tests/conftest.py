"""Shared scenarios for the mixrisk tests."""

from pathlib import Path
from typing import Callable, Tuple

import pytest

from mixrisk import (
    CaraAdditiveUtility,
    CaraCrraProductUtility,
    DomainBox,
    LogAdditiveUtility,
    ModelKind,
    QuadraticUtility,
    RectangularFuzzyNumber,
    SavingScenario,
    UniformRandomVariable,
)
from mixrisk.solver import Risk

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def _default_quadrature(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("MIXRISK_QUAD_NODES", raising=False)


@pytest.fixture
def fixture_text() -> Callable[[str], str]:
    def read(name: str) -> str:
        return (FIXTURES / name).read_text(encoding="utf-8")

    return read


def _risks(model: ModelKind, c: float, d: float) -> Tuple[Risk, Risk]:
    """Income and background risks on [c, d]; the fuzzy side follows the model."""
    fuzzy = RectangularFuzzyNumber(c, d)
    uniform = UniformRandomVariable(c, d)
    income = fuzzy if model is ModelKind.MIXED_I else uniform
    background = fuzzy if model is ModelKind.MIXED_II else uniform
    return income, background


def threshold_scenario(c: float, d: float, model: ModelKind = ModelKind.MIXED_I) -> SavingScenario:
    """Log-additive u, CARA-CRRA v with alpha = 1 and gamma = 3/4, A and X on [c, d]."""
    income, background = _risks(model, c, d)
    return SavingScenario(
        model=model,
        y0=2.0,
        x0=1.0,
        u=LogAdditiveUtility(),
        v=CaraCrraProductUtility(1.0, 0.75, DomainBox(-5.0, 5.0, 0.05, 2.0)),
        income_risk=income,
        background_risk=background,
        override_v_assumptions=True,
    )


def cara_scenario(model: ModelKind, c: float = 0.9, d: float = 1.1) -> SavingScenario:
    """Separable CARA u and v with both risks on [c, d]; the fuzzy side follows the model."""
    income, background = _risks(model, c, d)
    return SavingScenario(
        model=model,
        y0=3.0,
        x0=1.0,
        u=CaraAdditiveUtility(1.0, 1.0),
        v=CaraAdditiveUtility(1.0, 1.0),
        income_risk=income,
        background_risk=background,
    )


def log_scenario(model: ModelKind, c: float = 0.5, d: float = 1.5) -> SavingScenario:
    """u = v = ln y + ln x with y0 = 3 and both risks on [c, d]."""
    income, background = _risks(model, c, d)
    box = DomainBox(0.2, 20.0, 0.2, 20.0)
    return SavingScenario(
        model=model,
        y0=3.0,
        x0=1.0,
        u=LogAdditiveUtility(box),
        v=LogAdditiveUtility(box),
        income_risk=income,
        background_risk=background,
    )


def quadratic_scenario(model: ModelKind, spread: float = 0.5) -> SavingScenario:
    income, background = _risks(model, 1.0 - spread, 1.0 + spread)
    box = DomainBox(0.0, 9.0, 0.0, 9.0)
    return SavingScenario(
        model=model,
        y0=4.0,
        x0=1.0,
        u=QuadraticUtility(0.05, 0.05, box),
        v=QuadraticUtility(0.05, 0.05, box),
        income_risk=income,
        background_risk=background,
    )
