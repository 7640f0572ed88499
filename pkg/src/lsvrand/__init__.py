__version__ = "0.1.0"

from .core import (
    CouplingConfig,
    DensityCocycle,
    EnvironmentPath,
    ExperimentConfig,
    ExperimentRunner,
    Grid,
    build_law,
    read_config,
    sample_path,
    simulate_coupling_time,
    ulam_matrix,
)
from .errors import LsvError

__all__ = [
    "build_law",
    "sample_path",
    "EnvironmentPath",
    "Grid",
    "ulam_matrix",
    "DensityCocycle",
    "CouplingConfig",
    "simulate_coupling_time",
    "ExperimentConfig",
    "ExperimentRunner",
    "read_config",
    "LsvError",
]
