from .density import (
    DensityCocycle,
    DensityEstimate,
    DensityVector,
    cone_report,
    equivariant_density,
    integrate,
    l1_distance,
    lp_norm,
    push_density,
    tv_distance_curve,
)
from .grid import Grid
from .normalized import compose, normalized_push, normalized_step
from .ulam import UlamFamily, UlamMatrix, cache_key, ulam_matrix

__all__ = [
    "Grid",
    "UlamMatrix",
    "UlamFamily",
    "ulam_matrix",
    "cache_key",
    "DensityVector",
    "DensityEstimate",
    "DensityCocycle",
    "push_density",
    "equivariant_density",
    "integrate",
    "lp_norm",
    "l1_distance",
    "tv_distance_curve",
    "cone_report",
    "normalized_push",
    "normalized_step",
    "compose",
]
