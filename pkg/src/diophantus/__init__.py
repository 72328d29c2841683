"""Exact rational-point constructions for six classical Diophantine surfaces."""

from .double_equation import (
    CurvePoint,
    DoubleEquation,
    MethodInapplicable,
    classify,
    fermat_coefficient,
    fermat_iterates,
    fermat_step,
    has_good_reduction,
    points_at_infinity,
    solve,
)
from .exact_math import MultiPoly, Rat, UniPoly, to_rat
from .local_solubility import DiagConic, conic_soluble, hilbert_symbol, padic_insoluble_system
from .parametrizations import ENGINES, ExcludedParameter
from .surfaces import PROBLEMS, RatPoint, SurfaceModel, membership, surface

__version__ = "0.1.0"

__all__ = [
    "CurvePoint", "DiagConic", "DoubleEquation", "ENGINES", "ExcludedParameter",
    "MethodInapplicable", "MultiPoly", "PROBLEMS", "Rat", "RatPoint", "SurfaceModel",
    "UniPoly", "classify", "conic_soluble", "fermat_coefficient", "fermat_iterates",
    "fermat_step", "has_good_reduction", "hilbert_symbol", "membership",
    "padic_insoluble_system", "points_at_infinity", "solve", "surface", "to_rat",
]
