from .manifest import FitSummary, RunManifest
from .reader import ConfigReader, ExperimentConfig, blob_hash, parse_config, read_config
from .runner import CommandResult, Diagnostic, ExperimentRunner, resolve_output_dir, validate_config
from .writer import ResultWriter

__all__ = [
    "ConfigReader",
    "ExperimentConfig",
    "blob_hash",
    "parse_config",
    "read_config",
    "ResultWriter",
    "RunManifest",
    "FitSummary",
    "ExperimentRunner",
    "CommandResult",
    "Diagnostic",
    "validate_config",
    "resolve_output_dir",
]
