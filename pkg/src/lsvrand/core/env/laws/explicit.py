"""
Explicit law: a user-supplied β sequence with a chosen origin.
"""

from typing import Any, Dict, Sequence

import numpy as np

from ....errors import ConfigurationError, RangeError
from .base import ParameterLaw


class ExplicitLaw(ParameterLaw):
    """Replays ``sequence`` with ``sequence[origin]`` at t = 0.

    The stationary statistics (b0, esssup) are those of the empirical
    distribution of the sequence.
    """

    def __init__(self, sequence: Sequence[float], origin: int = 0):
        self.sequence = np.asarray(sequence, dtype=float)
        self._check_betas(self.sequence)
        if not 0 <= origin < self.sequence.size:
            raise ConfigurationError(
                f"origin {origin} outside sequence of length {self.sequence.size}"
            )
        self.origin = int(origin)

    @property
    def kind(self) -> str:
        return "explicit"

    def esssup(self) -> float:
        return float(self.sequence.max())

    def b0(self, gamma: float) -> float:
        return float(np.mean(self.sequence <= gamma))

    def sample(self, n_past, n_future, forward_rng, backward_rng) -> np.ndarray:
        start = self.origin - n_past
        stop = self.origin + n_future + 1
        if start < 0 or stop > self.sequence.size:
            raise RangeError(
                f"explicit sequence covers t in [{-self.origin}, "
                f"{self.sequence.size - 1 - self.origin}], requested [{-n_past}, {n_future}]"
            )
        return self.sequence[start:stop].copy()

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "sequence": self.sequence.tolist(), "origin": self.origin}
