from .coupling import CouplingConfig, induced_constants, simulate_coupling_time
from .env import EnvironmentPath, build_law, sample_path
from .lsv import build_return_structure, map_eval
from .pipeline import ExperimentConfig, ExperimentRunner, read_config
from .transfer import DensityCocycle, Grid, ulam_matrix

__all__ = [
    "build_law",
    "sample_path",
    "EnvironmentPath",
    "map_eval",
    "build_return_structure",
    "Grid",
    "ulam_matrix",
    "DensityCocycle",
    "CouplingConfig",
    "induced_constants",
    "simulate_coupling_time",
    "ExperimentConfig",
    "ExperimentRunner",
    "read_config",
]
