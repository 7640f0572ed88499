from typing import Any, Dict

from ....errors import ConfigurationError
from .base import ParameterLaw
from .constant import ConstantLaw
from .explicit import ExplicitLaw
from .iid import IidDiscreteLaw, IidUniformLaw
from .markov import MarkovLaw, stationary_distribution, time_reversal


def build_law(kind: str, **params: Any) -> ParameterLaw:
    """Construct a law from its config name and parameters.

    Args:
        kind: One of constant, iid-discrete, iid-uniform, finite-markov, explicit
        **params: Keyword arguments of the law class

    Returns:
        ParameterLaw implementation for the kind
    """
    laws: Dict[str, type] = {
        "constant": ConstantLaw,
        "iid-discrete": IidDiscreteLaw,
        "iid-uniform": IidUniformLaw,
        "finite-markov": MarkovLaw,
        "explicit": ExplicitLaw,
    }
    if kind not in laws:
        raise ConfigurationError(f"unknown law kind '{kind}'; expected one of {sorted(laws)}")
    try:
        return laws[kind](**params)
    except TypeError as exc:
        raise ConfigurationError(f"bad parameters for {kind} law: {exc}") from exc


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
]
