"""
Environment paths

An EnvironmentPath is a finite two-sided window of the driving sequence
β(σ^t ω), t = -n_past, ..., n_future. Shifting ω by σ^t is an index shift.
This module also holds the counting statistics S_n^± and the regularity
horizon N_ε.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from ...errors import ConfigurationError, RangeError
from .laws import ParameterLaw
from .seeds import derive_seed, make_rng

logger = logging.getLogger(__name__)

BRACKET_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class EnvironmentPath:
    """Read-only window of β values around the origin.

    Attributes:
        betas: β values, ``betas[0]`` holding t = -n_past
        n_past: Entries before the origin
        seed: Seed the path was sampled with
        law: Law the path was sampled from, if any
    """

    betas: np.ndarray
    n_past: int
    seed: int = 0
    law: Optional[ParameterLaw] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        betas = np.array(self.betas, dtype=float)
        if betas.ndim != 1 or betas.size < 1:
            raise ConfigurationError("betas must be a nonempty 1-D array")
        if np.any(betas < 0.0) or np.any(betas >= 1.0):
            raise ConfigurationError("path entries must lie in [0, 1)")
        if not 0 <= self.n_past < betas.size:
            raise ConfigurationError(f"origin index {self.n_past} outside window")
        betas.flags.writeable = False
        object.__setattr__(self, "betas", betas)

    @classmethod
    def from_sequence(cls, betas, n_past: int = 0) -> "EnvironmentPath":
        """Path with the given entries, ``betas[n_past]`` at the origin."""
        return cls(betas=np.asarray(betas, dtype=float), n_past=n_past)

    @property
    def n_future(self) -> int:
        return self.betas.size - self.n_past - 1

    @property
    def t_min(self) -> int:
        return -self.n_past

    @property
    def t_max(self) -> int:
        return self.n_future

    def covers(self, t_start: int, t_stop: int) -> bool:
        """True if every t with t_start <= t < t_stop is in the window."""
        return t_stop <= t_start or (t_start >= self.t_min and t_stop - 1 <= self.t_max)

    def require(self, t_start: int, t_stop: int) -> None:
        """Raise RangeError unless shifts t_start <= t < t_stop are available."""
        if not self.covers(t_start, t_stop):
            raise RangeError(
                f"path window [{self.t_min}, {self.t_max}] does not cover "
                f"shifts [{t_start}, {t_stop - 1}]"
            )

    def beta(self, t: int) -> float:
        """β(σ^t ω)."""
        self.require(t, t + 1)
        return float(self.betas[t + self.n_past])

    def window(self, t_start: int, t_stop: int) -> np.ndarray:
        """β values for t_start <= t < t_stop."""
        self.require(t_start, t_stop)
        return self.betas[t_start + self.n_past : t_stop + self.n_past]

    def is_constant(self) -> bool:
        return bool(np.all(self.betas == self.betas[0]))

    def to_frame(self) -> pd.DataFrame:
        """Table with columns t, beta."""
        t = np.arange(self.t_min, self.t_max + 1, dtype=np.int64)
        return pd.DataFrame({"t": t, "beta": self.betas})


def sample_path(law: ParameterLaw, n_past: int, n_future: int, seed: int) -> EnvironmentPath:
    """Sample a two-sided window from a parameter law.

    Args:
        law: Law of the driving sequence
        n_past: Entries before the origin
        n_future: Entries after the origin
        seed: 64-bit seed; forward and backward halves use derived streams

    Returns:
        EnvironmentPath of length n_past + n_future + 1
    """
    if n_past < 0 or n_future < 0:
        raise ConfigurationError("n_past and n_future must be nonnegative")
    betas = law.sample(n_past, n_future, make_rng(seed, 0), make_rng(seed, 1))
    return EnvironmentPath(betas=betas, n_past=n_past, seed=seed, law=law)


def _indicator_counts(path: EnvironmentPath, gamma: float, n: int, direction: str) -> np.ndarray:
    """Cumulative counts of β ≤ gamma along j = 0..n-1 in one direction."""
    if direction == "forward":
        values = path.window(0, n)
    elif direction == "backward":
        values = path.window(-n + 1, 1)[::-1] if n > 0 else np.empty(0)
    else:
        raise ConfigurationError(f"direction must be forward or backward, got {direction!r}")
    return np.cumsum(values <= gamma)


def count_below(path: EnvironmentPath, gamma: float, n: int, direction: str = "forward") -> int:
    """S_n^± = #{0 <= j <= n-1 : β(σ^{±j} ω) <= gamma}.

    Raises:
        RangeError: The window is too short in the requested direction
    """
    if n < 0:
        raise RangeError("n must be nonnegative")
    if n == 0:
        return 0
    return int(_indicator_counts(path, gamma, n, direction)[-1])


def b0_of(law: ParameterLaw, gamma: float) -> float:
    """b0 = P(β <= gamma) under the stationary law.

    A zero result violates the standing assumption; callers that need b0 > 0
    must reject it.
    """
    if not 0.0 < gamma < 1.0:
        raise ConfigurationError(f"gamma must lie in (0, 1), got {gamma}")
    b0 = law.b0(gamma)
    if b0 == 0.0:
        logger.warning("b0 = 0 for gamma=%s: no mass at or below gamma", gamma)
    return b0


def n_eps(
    path: EnvironmentPath, gamma: float, b0: float, epsilon: float, horizon: int
) -> Tuple[int, bool]:
    """Regularity horizon N_ε on a finite horizon.

    Returns the largest n <= horizon, over both directions, for which
    S_n / n falls outside [b0(1-ε), b0(1+ε)] (0 if none).

    Returns:
        (value, saturated); saturated is True when the violation reaches the
        horizon, so the true N_ε may be larger.
    """
    if not 0.0 < epsilon < 0.5:
        raise ConfigurationError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    if horizon < 0 or horizon > min(path.n_past, path.n_future):
        raise RangeError(
            f"horizon {horizon} exceeds min(n_past, n_future) = {min(path.n_past, path.n_future)}"
        )
    if horizon == 0:
        return 0, True

    n = np.arange(1, horizon + 1)
    lo = b0 * (1.0 - epsilon) - BRACKET_TOLERANCE
    hi = b0 * (1.0 + epsilon) + BRACKET_TOLERANCE
    value = 0
    for direction in ("forward", "backward"):
        ratios = _indicator_counts(path, gamma, horizon, direction) / n
        violations = np.flatnonzero((ratios < lo) | (ratios > hi))
        if violations.size:
            value = max(value, int(n[violations[-1]]))
    saturated = value == horizon
    if saturated:
        logger.warning("N_eps saturated at horizon %d", horizon)
    return value, saturated


def n_eps_survey(
    law: ParameterLaw,
    gamma: float,
    epsilon: float,
    horizon: int,
    n_paths: int,
    seed: int,
    s: float = 1.0,
) -> pd.DataFrame:
    """N_ε across independent replicas, with the realized memory-loss prefactor.

    Replica k is sampled with seed derived from (seed, k). The prefactor
    column is (1 + N_ε)^{(1/s)(1/γ - 1)}, the random constant in front of the
    quenched L^s memory-loss rate.

    Returns:
        Table with columns replica, n_eps, saturated, prefactor
    """
    b0 = b0_of(law, gamma)
    if b0 == 0.0:
        raise ConfigurationError(f"b0 = 0 for gamma={gamma}; N_eps is undefined")
    exponent = (1.0 / s) * (1.0 / gamma - 1.0)
    rows = []
    for k in range(n_paths):
        path = sample_path(law, horizon, horizon, derive_seed(seed, k))
        value, saturated = n_eps(path, gamma, b0, epsilon, horizon)
        rows.append(
            {
                "replica": k,
                "n_eps": value,
                "saturated": int(saturated),
                "prefactor": float((1.0 + value) ** exponent),
            }
        )
    return pd.DataFrame(rows, columns=["replica", "n_eps", "saturated", "prefactor"])
