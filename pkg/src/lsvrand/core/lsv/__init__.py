from .maps import advance, left_inverse, map_deriv, map_eval, orbit
from .returns import (
    ReturnStructure,
    build_return_structure,
    return_time,
    return_times,
    tail_u,
)

__all__ = [
    "map_eval",
    "map_deriv",
    "left_inverse",
    "advance",
    "orbit",
    "return_time",
    "return_times",
    "ReturnStructure",
    "build_return_structure",
    "tail_u",
]
