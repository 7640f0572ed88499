"""
Independent laws

IidDiscreteLaw draws each β from finitely many atoms, IidUniformLaw from a
uniform interval inside [0, 1).
"""

from typing import Any, Dict, Sequence

import numpy as np

from ....errors import ConfigurationError
from .base import ParameterLaw


class IidDiscreteLaw(ParameterLaw):
    """β values drawn independently from weighted atoms."""

    def __init__(self, values: Sequence[float], probs: Sequence[float]):
        self.values = np.asarray(values, dtype=float)
        self.probs = np.asarray(probs, dtype=float)
        self._check_betas(self.values)
        if self.values.shape != self.probs.shape:
            raise ConfigurationError("values and probs must have the same length")
        self._check_probabilities(self.probs)
        self._cumulative = np.cumsum(self.probs)
        self._cumulative[-1] = 1.0

    @property
    def kind(self) -> str:
        return "iid-discrete"

    def esssup(self) -> float:
        return float(self.values[self.probs > 0].max())

    def b0(self, gamma: float) -> float:
        return float(self.probs[self.values <= gamma].sum())

    def _draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        index = np.searchsorted(self._cumulative, rng.random(count), side="right")
        return self.values[np.minimum(index, self.values.size - 1)]

    def sample(self, n_past, n_future, forward_rng, backward_rng) -> np.ndarray:
        future = self._draw(forward_rng, n_future + 1)
        past = self._draw(backward_rng, n_past)
        return np.concatenate([past[::-1], future])

    def alpha_bound(self, n: int) -> float:
        return 0.0 if n >= 1 else 0.25

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "values": self.values.tolist(), "probs": self.probs.tolist()}


class IidUniformLaw(ParameterLaw):
    """β values drawn independently and uniformly from [lo, hi]."""

    def __init__(self, lo: float, hi: float):
        self._check_betas(np.array([lo, hi], dtype=float), what="uniform bound")
        if not lo < hi:
            raise ConfigurationError(f"uniform law needs lo < hi, got lo={lo}, hi={hi}")
        self.lo = float(lo)
        self.hi = float(hi)

    @property
    def kind(self) -> str:
        return "iid-uniform"

    def esssup(self) -> float:
        return self.hi

    def b0(self, gamma: float) -> float:
        return float(np.clip((gamma - self.lo) / (self.hi - self.lo), 0.0, 1.0))

    def sample(self, n_past, n_future, forward_rng, backward_rng) -> np.ndarray:
        future = forward_rng.uniform(self.lo, self.hi, n_future + 1)
        past = backward_rng.uniform(self.lo, self.hi, n_past)
        return np.concatenate([past[::-1], future])

    def alpha_bound(self, n: int) -> float:
        return 0.0 if n >= 1 else 0.25

    def describe(self) -> Dict[str, Any]:
        return {"kind": self.kind, "lo": self.lo, "hi": self.hi}
