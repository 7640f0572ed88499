"""
Finite-state Markov law

The driving sequence is a stationary Markov chain on finitely many β values.
Two-sided windows draw the origin from the stationary distribution, run the
chain forward with P and backward with the time reversal
P̂_ij = π_j P_ji / π_i, which gives the stationary two-sided law.
"""

import logging
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ....errors import ConfigurationError
from .base import STOCHASTIC_TOLERANCE, ParameterLaw

logger = logging.getLogger(__name__)

STATIONARY_TOLERANCE = 1e-10


def stationary_distribution(transition: np.ndarray) -> np.ndarray:
    """Stationary distribution from the left eigenvector for eigenvalue 1.

    Args:
        transition: Row-stochastic matrix

    Returns:
        Probability vector π with πP = π
    """
    eigenvalues, eigenvectors = np.linalg.eig(np.asarray(transition, dtype=float).T)
    index = int(np.argmin(np.abs(eigenvalues - 1.0)))
    pi = np.real(eigenvectors[:, index])
    pi = np.abs(pi) / np.abs(pi).sum()
    return pi


def time_reversal(transition: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """Reversed chain with π_i P̂_ij = π_j P_ji.

    States with zero stationary mass get an absorbing row; they are never
    visited by a stationary path.
    """
    transition = np.asarray(transition, dtype=float)
    reversed_ = np.zeros_like(transition)
    for i, mass in enumerate(pi):
        if mass > 0:
            reversed_[i] = pi * transition[:, i] / mass
        else:
            reversed_[i, i] = 1.0
    return reversed_


def _run_chain(
    start: int, cumulative: np.ndarray, uniforms: np.ndarray, n_states: int
) -> np.ndarray:
    states = np.empty(uniforms.size, dtype=np.int64)
    current = start
    for k, u in enumerate(uniforms):
        current = min(int(np.searchsorted(cumulative[current], u, side="right")), n_states - 1)
        states[k] = current
    return states


class MarkovLaw(ParameterLaw):
    """Stationary finite Markov chain on β values."""

    def __init__(
        self,
        states: Sequence[float],
        transition: Sequence[Sequence[float]],
        initial: Optional[Sequence[float]] = None,
    ):
        self.states = np.asarray(states, dtype=float)
        self.transition = np.asarray(transition, dtype=float)
        self._check_betas(self.states, what="state beta")
        n = self.states.size
        if self.transition.shape != (n, n):
            raise ConfigurationError(
                f"transition must be {n}x{n}, got shape {self.transition.shape}"
            )
        if np.any(self.transition < 0) or np.any(
            np.abs(self.transition.sum(axis=1) - 1.0) > STOCHASTIC_TOLERANCE
        ):
            raise ConfigurationError("transition rows must be nonnegative and sum to 1")

        if initial is None:
            self.initial = stationary_distribution(self.transition)
            logger.debug("Computed stationary distribution %s", self.initial)
        else:
            self.initial = np.asarray(initial, dtype=float)
            self._check_probabilities(self.initial, what="initial distribution")
            defect = np.abs(self.initial @ self.transition - self.initial).max()
            if defect > STATIONARY_TOLERANCE:
                raise ConfigurationError(
                    f"initial distribution is not stationary (defect {defect:.3e})"
                )

        self.reversed_transition = time_reversal(self.transition, self.initial)
        self._forward_cumulative = np.cumsum(self.transition, axis=1)
        self._backward_cumulative = np.cumsum(self.reversed_transition, axis=1)
        self._initial_cumulative = np.cumsum(self.initial)

    @property
    def kind(self) -> str:
        return "finite-markov"

    def esssup(self) -> float:
        return float(self.states[self.initial > 0].max())

    def b0(self, gamma: float) -> float:
        return float(self.initial[self.states <= gamma].sum())

    def sample(self, n_past, n_future, forward_rng, backward_rng) -> np.ndarray:
        n = self.states.size
        origin = min(
            int(np.searchsorted(self._initial_cumulative, forward_rng.random(), side="right")),
            n - 1,
        )
        future = _run_chain(origin, self._forward_cumulative, forward_rng.random(n_future), n)
        past = _run_chain(origin, self._backward_cumulative, backward_rng.random(n_past), n)
        indices = np.concatenate([past[::-1], [origin], future])
        return self.states[indices]

    def alpha_bound(self, n: int) -> float:
        """max_i ‖Pⁿ(i,·) − π‖_TV, an upper bound for α(n) of the stationary chain."""
        power = np.linalg.matrix_power(self.transition, int(n))
        return float(0.5 * np.abs(power - self.initial[None, :]).sum(axis=1).max())

    def describe(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "states": self.states.tolist(),
            "transition": self.transition.tolist(),
            "initial": self.initial.tolist(),
        }
