"""Predicted murmuration density: tables, Bessel kernel, truncated sums, checks."""

from .bessel import bessel_j0, bessel_j1, bessel_j2
from .density import (
    DensityVector,
    collect_terms,
    convergence_in_B,
    convergence_in_P,
    interpolation_residual,
    rhs_coarse,
    rhs_direct_p1,
    rhs_point,
    rhs_vector,
)
from .tables import MultiplicativeTables, build_tables
from .voronoi import BumpWindow, VoronoiResult, hankel_hat, hankel_transform, voronoi_check

__all__ = [
    "bessel_j0",
    "bessel_j1",
    "bessel_j2",
    "DensityVector",
    "collect_terms",
    "convergence_in_B",
    "convergence_in_P",
    "interpolation_residual",
    "rhs_coarse",
    "rhs_direct_p1",
    "rhs_point",
    "rhs_vector",
    "MultiplicativeTables",
    "build_tables",
    "BumpWindow",
    "VoronoiResult",
    "hankel_hat",
    "hankel_transform",
    "voronoi_check",
]
