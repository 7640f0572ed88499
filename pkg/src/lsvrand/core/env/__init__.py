from .laws import (
    ConstantLaw,
    ExplicitLaw,
    IidDiscreteLaw,
    IidUniformLaw,
    MarkovLaw,
    ParameterLaw,
    build_law,
    stationary_distribution,
    time_reversal,
)
from .mixing import MixingProfile, alpha_bound, fit_mixing_rate, mixing_profile
from .path import EnvironmentPath, b0_of, count_below, n_eps, n_eps_survey, sample_path
from .seeds import derive_seed, make_rng, sample_blocks, splitmix64

__all__ = [
    "ParameterLaw",
    "ConstantLaw",
    "IidDiscreteLaw",
    "IidUniformLaw",
    "MarkovLaw",
    "ExplicitLaw",
    "build_law",
    "stationary_distribution",
    "time_reversal",
    "MixingProfile",
    "alpha_bound",
    "mixing_profile",
    "fit_mixing_rate",
    "EnvironmentPath",
    "sample_path",
    "count_below",
    "b0_of",
    "n_eps",
    "n_eps_survey",
    "derive_seed",
    "make_rng",
    "sample_blocks",
    "splitmix64",
]
