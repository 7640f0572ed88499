"""
Constant law: the deterministic environment β(σ^j ω) = β.
"""

from typing import Any, Dict

import numpy as np

from .base import ParameterLaw


class ConstantLaw(ParameterLaw):
    """Every entry of every path equals ``beta``."""

    def __init__(self, beta: float):
        self._check_betas(np.array([beta], dtype=float))
        self.beta = float(beta)

    @property
    def kind(self) -> str:
        return "constant"

    def esssup(self) -> float:
        return self.beta

    def b0(self, gamma: float) -> float:
        return 1.0 if self.beta <= gamma else 0.0

    def sample(self, n_past, n_future, forward_rng, backward_rng) -> np.ndarray:
        return np.full(n_past + n_future + 1, self.beta, dtype=float)

    def alpha_bound(self, n: int) -> float:
        return 0.0

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "beta": self.beta}
