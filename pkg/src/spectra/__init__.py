"""Perturbing eigenvalues of nonnegative matrices, and the convex-polygon
area ratios that bound the cost of doing so."""

from .estimators import ConstantRowSumScaler, PairShift
from .exceptions import SpectraError
from .matcore import eigenvalues, real_pair_eigenvectors, spectrum_match
from .nonneg import is_irreducible, is_nonnegative, perron, to_constant_row_sums
from .perturb import (
    Certificate,
    PerturbPlan,
    build_plan,
    construction_threshold,
    rank_update,
    shift_complex_pair,
)
from .polygeom import (
    ConvexPolygon,
    extremal_hexagon,
    extremal_pentagon,
    gamma,
    max_triangle,
    search_max_ratio,
    triangle_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "ConstantRowSumScaler",
    "ConvexPolygon",
    "PairShift",
    "PerturbPlan",
    "SpectraError",
    "build_plan",
    "construction_threshold",
    "eigenvalues",
    "extremal_hexagon",
    "extremal_pentagon",
    "gamma",
    "is_irreducible",
    "is_nonnegative",
    "max_triangle",
    "perron",
    "rank_update",
    "real_pair_eigenvectors",
    "search_max_ratio",
    "shift_complex_pair",
    "spectrum_match",
    "to_constant_row_sums",
    "triangle_ratio",
]
