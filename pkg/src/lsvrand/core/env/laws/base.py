"""
Abstract Base Class for Parameter Laws

A parameter law is the stationary distribution of the driving sequence
β(σ^j ω). Each law kind (constant, iid, finite Markov, explicit sequence)
implements sampling of a two-sided window and the exact statistics the rest
of the package needs from it.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np

from ....errors import CapabilityError, ConfigurationError

STOCHASTIC_TOLERANCE = 1e-12


class ParameterLaw(ABC):
    """Abstract base class for laws of the driving sequence."""

    @property
    @abstractmethod
    def kind(self) -> str:
        """Return the config name of the law kind."""
        pass

    @abstractmethod
    def esssup(self) -> float:
        """Essential supremum of β under the law."""
        pass

    @abstractmethod
    def b0(self, gamma: float) -> float:
        """Stationary probability that β ≤ gamma."""
        pass

    @abstractmethod
    def sample(
        self,
        n_past: int,
        n_future: int,
        forward_rng: np.random.Generator,
        backward_rng: np.random.Generator,
    ) -> np.ndarray:
        """Sample betas for t = -n_past, ..., n_future.

        The origin and future entries come from ``forward_rng`` and the past
        entries from ``backward_rng``, so extending the window on one side
        never changes the other side.

        Args:
            n_past: Number of entries before the origin
            n_future: Number of entries after the origin
            forward_rng: Generator for t >= 0
            backward_rng: Generator for t < 0

        Returns:
            Array of length n_past + n_future + 1, index 0 holding t = -n_past
        """
        pass

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """Plain-data description used in manifests and CSV metadata."""
        pass

    def alpha_bound(self, n: int) -> float:
        """Upper bound on the α-mixing coefficient at gap n.

        Raises:
            CapabilityError: The law kind has no computable bound
        """
        raise CapabilityError(f"alpha_bound is not available for {self.kind} laws")

    @staticmethod
    def _check_betas(values: np.ndarray, what: str = "beta") -> None:
        if values.size == 0:
            raise ConfigurationError(f"{what} list is empty")
        if not np.all(np.isfinite(values)) or np.any(values < 0.0) or np.any(values >= 1.0):
            raise ConfigurationError(f"every {what} must lie in [0, 1), got {values.tolist()}")

    @staticmethod
    def _check_probabilities(probs: np.ndarray, what: str = "probabilities") -> None:
        if np.any(probs < 0.0) or abs(float(probs.sum()) - 1.0) > STOCHASTIC_TOLERANCE:
            raise ConfigurationError(
                f"{what} must be nonnegative and sum to 1, got {probs.tolist()}"
            )

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.describe().items() if k != "kind")
        return f"{type(self).__name__}({params})"
