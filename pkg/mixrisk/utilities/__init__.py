"""Bivariate utility families."""

from mixrisk.utilities.cara_crra import CaraCrraProductUtility
from mixrisk.utilities.log_additive import LogAdditiveUtility
from mixrisk.utilities.cara_additive import CaraAdditiveUtility
from mixrisk.utilities.quadratic import QuadraticUtility
from mixrisk.utilities.tabulated import CallableUtility

__all__ = [
    "CaraCrraProductUtility",
    "LogAdditiveUtility",
    "CaraAdditiveUtility",
    "QuadraticUtility",
    "CallableUtility",
]
