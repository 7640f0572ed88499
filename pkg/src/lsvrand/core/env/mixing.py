"""
Mixing coefficients of the driving sequence

Bounds α(n) from the law and fits the polynomial-logarithmic rate
α(n) ≈ C n^{-(q-1)} log(n)^{-ι} that the mixing corollaries are stated in.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ...errors import ConfigurationError
from .laws import ParameterLaw

ALPHA_CEILING = 0.25


@dataclass(frozen=True)
class MixingProfile:
    """Bounds α(1), ..., α(n_max) with their provenance.

    Attributes:
        values: α-bound at n = 1..len(values), each in [0, 1/4]
        provenance: exact-iid, markov-tv-bound or user-supplied
    """

    values: Tuple[float, ...]
    provenance: str

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if np.any(values < 0.0) or np.any(values > ALPHA_CEILING):
            raise ConfigurationError("alpha bounds must lie in [0, 1/4]")
        if np.any(np.diff(values) > 0.0):
            raise ConfigurationError("alpha bounds must be nonincreasing in n")

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "MixingProfile":
        return cls(values=tuple(float(v) for v in values), provenance="user-supplied")

    def alpha(self, n: int) -> float:
        if n < 1:
            return ALPHA_CEILING
        if n > len(self.values):
            raise ConfigurationError(f"profile only covers n <= {len(self.values)}")
        return self.values[n - 1]


def alpha_bound(law: ParameterLaw, n: int) -> float:
    """Upper bound on α(n) for the law (see ParameterLaw.alpha_bound)."""
    if n < 0:
        raise ConfigurationError("n must be nonnegative")
    return law.alpha_bound(n)


def mixing_profile(law: ParameterLaw, n_max: int) -> MixingProfile:
    """Profile of α-bounds for n = 1..n_max.

    The total-variation bound can exceed 1/4 for slowly mixing chains; since
    every α-coefficient is at most 1/4 the profile stores the minimum of both.
    """
    raw = np.array([alpha_bound(law, n) for n in range(1, n_max + 1)])
    values = np.minimum.accumulate(np.minimum(raw, ALPHA_CEILING))
    provenance = "markov-tv-bound" if law.kind == "finite-markov" else "exact-iid"
    return MixingProfile(values=tuple(values.tolist()), provenance=provenance)


def fit_mixing_rate(profile: MixingProfile, n_min: int = 3) -> Tuple[float, float]:
    """Least-squares fit of (q, ι) in log α(n) = c - (q-1) log n - ι log log n.

    Returns:
        (q, iota); (inf, 0.0) when the profile vanishes from n_min on.
    """
    n = np.arange(1, len(profile.values) + 1, dtype=float)
    values = np.asarray(profile.values)
    keep = (n >= n_min) & (values > 0.0)
    if keep.sum() < 3:
        return float("inf"), 0.0
    design = np.column_stack([np.ones(keep.sum()), -np.log(n[keep]), -np.log(np.log(n[keep]))])
    coef, *_ = np.linalg.lstsq(design, np.log(values[keep]), rcond=None)
    return float(coef[1] + 1.0), float(coef[2])
