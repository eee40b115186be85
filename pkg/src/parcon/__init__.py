"""Rank-2 parabolic logarithmic lambda-connections on hyperelliptic curves.

Exact arithmetic throughout. The main entry point is
:func:`parcon.reconstruct.invert_app_bun`, which rebuilds a connection from
its apparent-singularity section and its underlying parabolic bundle.
"""

__version__ = "0.1.0"

from .curve import CurveModel, CurvePoint, DifferentialForm, Divisor, FunctionFieldElement
from .cohomology import ChartCover, LineBundleData, Sheaf, h1_basis, rr_space_basis, split_cocycle
from .parabolic import ExponentData, ParabolicBundleData, Weights, fuchs_check, resonance_check
from .connection import ConnectionData, validate_connection
from .reconstruct import invert_app_bun, reconstruct
from .scenario import Scenario, reference_scenario

__all__ = [
    "ChartCover", "ConnectionData", "CurveModel", "CurvePoint", "DifferentialForm", "Divisor", "ExponentData",
    "FunctionFieldElement", "LineBundleData", "ParabolicBundleData", "Scenario", "Sheaf", "Weights",
    "fuchs_check", "h1_basis", "invert_app_bun", "reconstruct", "reference_scenario", "resonance_check",
    "rr_space_basis", "split_cocycle", "validate_connection",
]
