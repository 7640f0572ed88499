from .induced import (
    ContractionReport,
    RegularityConstants,
    RegularityReport,
    contraction_check,
    image_mesh,
    induced_constants,
    regularity_check,
)
from .seminorm import ll_seminorm
from .tails import (
    ConditionalTail,
    CouplingConfig,
    CouplingTailSample,
    DoublingTail,
    GeometricConditional,
    GeometricTail,
    ReturnTail,
    TailFunction,
    WindowedTail,
    ZeroConditional,
    ZeroTail,
    build_tails,
    compound_geometric_tail,
    coupling_structure,
    dkw_epsilon,
    empirical_tail,
    exact_coupling_tail,
    measure_tail,
    simulate_coupling_time,
    u_window,
)

__all__ = [
    "ll_seminorm",
    "RegularityConstants",
    "RegularityReport",
    "ContractionReport",
    "image_mesh",
    "induced_constants",
    "regularity_check",
    "contraction_check",
    "TailFunction",
    "ReturnTail",
    "DoublingTail",
    "GeometricTail",
    "ZeroTail",
    "ConditionalTail",
    "WindowedTail",
    "GeometricConditional",
    "ZeroConditional",
    "CouplingConfig",
    "CouplingTailSample",
    "build_tails",
    "coupling_structure",
    "u_window",
    "simulate_coupling_time",
    "empirical_tail",
    "exact_coupling_tail",
    "compound_geometric_tail",
    "dkw_epsilon",
    "measure_tail",
]
