"""Weighted weak Orlicz norms, maximal operators and extrapolation checks on 1-D grids."""

from .grid import DiscreteFunction, Grid1D, Weight, WeightedMeasure, corpus
from .young import BRho, Custom, GrowthFunction, Partner, PhiRho, Power, PsiConjugate, Rescaled

__all__ = [
    "BRho",
    "Custom",
    "DiscreteFunction",
    "Grid1D",
    "GrowthFunction",
    "Partner",
    "PhiRho",
    "Power",
    "PsiConjugate",
    "Rescaled",
    "Weight",
    "WeightedMeasure",
    "corpus",
]
