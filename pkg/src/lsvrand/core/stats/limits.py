"""
Limit theorem diagnostics

Kolmogorov distance of normalized Birkhoff sums to the standard normal law
and the growth of their L^s norms.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import stats

from ...errors import ConfigurationError, DegenerateCltError, RangeError
from ..transfer.density import DensityCocycle
from .curves import DecayCurve, ExponentFit, fit_exponent
from .observables import Observable
from .quenched import variance_curve
from .sampling import birkhoff_samples

logger = logging.getLogger(__name__)

DEGENERATE_THRESHOLD = 1e-6

Sampler = Callable[[Sequence[int], int, int], np.ndarray]


def kolmogorov_distance(samples: np.ndarray) -> float:
    """sup_t |F̂(t) - Φ(t)| for the empirical CDF of the samples."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise RangeError("no samples")
    return float(stats.kstest(samples, "norm").statistic)


@dataclass(frozen=True)
class CltReport:
    """Kolmogorov distances of S_n / Σ_{ω,n} with their fitted decay.

    Attributes:
        distances: Curve of distances against n
        sigma2: Σ²_{ω,n} at each n
        fit: Log-log fit of the distances, None with fewer than two points
        predicted_exponent: Rate exponent the theory predicts, reported only
    """

    distances: DecayCurve
    sigma2: np.ndarray
    fit: Optional[ExponentFit]
    predicted_exponent: Optional[float] = None


def clt_diagnostic(
    cocycle: DensityCocycle,
    phi: Observable,
    ns: Sequence[int],
    n_samples: int,
    seed: int,
    t: int = 0,
    threads: int = 1,
    sampler: Optional[Sampler] = None,
    predicted_exponent: Optional[float] = None,
) -> CltReport:
    """Distance of the law of S_n^ω φ / Σ_{ω,n} to N(0, 1) for each n.

    Args:
        cocycle: Cocycle along the path
        phi: Centered observable
        ns: Sums to test
        n_samples: Initial points per n
        seed: Base seed
        t: Starting shift
        threads: Worker threads
        sampler: Replaces Birkhoff sampling; called as sampler(ns, n_samples, seed)
            and must return an array (len(ns), n_samples)
        predicted_exponent: Carried into the report

    Raises:
        DegenerateCltError: Σ²_{ω,n}/n < 1e-6 at the largest n
    """
    ns = sorted(set(int(n) for n in ns))
    if not ns:
        raise ConfigurationError("clt_diagnostic needs at least one n")
    variance = variance_curve(cocycle, phi, ns, method="operator", t=t)
    if variance.value[-1] < DEGENERATE_THRESHOLD:
        raise DegenerateCltError(
            f"Σ²/n = {variance.value[-1]:.3e} at n={ns[-1]}: "
            "observable is (numerically) a coboundary"
        )
    sigma2 = variance.value * np.asarray(ns)

    if sampler is None:
        sums = birkhoff_samples(
            cocycle, phi, ns[-1], n_samples, seed, t=t, checkpoints=ns, threads=threads
        )
    else:
        sums = np.asarray(sampler(ns, n_samples, seed), dtype=float)

    distances = np.array(
        [kolmogorov_distance(row / np.sqrt(s2)) for row, s2 in zip(sums, sigma2)]
    )
    # DKW scale of the sampling noise in each distance
    noise = np.full(len(ns), 1.0 / np.sqrt(sums.shape[1]))
    curve = DecayCurve(
        n=np.asarray(ns),
        value=distances,
        stderr=noise,
        method="monte-carlo",
        description=f"kolmogorov distance {phi.name}",
    )
    fit = None
    if len(ns) >= 2:
        try:
            fit = fit_exponent(curve.n, curve.value, n_lo=ns[0], max_relative_error=np.inf)
        except RangeError:
            logger.warning("Not enough positive distances to fit a CLT rate")
    return CltReport(distances=curve, sigma2=sigma2, fit=fit, predicted_exponent=predicted_exponent)


@dataclass(frozen=True)
class MomentReport:
    """‖S_n^ω φ‖_{L^s(μ_ω)} against n with its fitted growth exponent."""

    curve: DecayCurve
    fit: Optional[ExponentFit]
    order: float
    predicted_exponent: Optional[float] = None


def moment_growth(
    cocycle: DensityCocycle,
    phi: Observable,
    s: float,
    ns: Sequence[int],
    n_samples: int,
    seed: int,
    t: int = 0,
    threads: int = 1,
    predicted_exponent: Optional[float] = None,
) -> MomentReport:
    """Empirical L^s norms of Birkhoff sums; stderr by the delta method."""
    if s < 2.0:
        raise ConfigurationError(f"moment order must be >= 2, got {s}")
    ns = sorted(set(int(n) for n in ns))
    sums = birkhoff_samples(
        cocycle, phi, ns[-1], n_samples, seed, t=t, checkpoints=ns, threads=threads
    )
    powers = np.abs(sums) ** s
    moments = powers.mean(axis=1)
    moment_err = powers.std(axis=1, ddof=1) / np.sqrt(sums.shape[1])
    norms = moments ** (1.0 / s)
    with np.errstate(divide="ignore", invalid="ignore"):
        stderr = np.where(moments > 0, norms * moment_err / (s * moments), 0.0)
    curve = DecayCurve(
        n=np.asarray(ns),
        value=norms,
        stderr=stderr,
        method="monte-carlo",
        norm=s,
        description=f"L^{s:g} norm of S_n {phi.name}",
    )
    fit = None
    if np.count_nonzero(norms > 0) >= 2:
        fit = fit_exponent(curve.n, curve.value, curve.stderr, n_lo=ns[0])
    return MomentReport(curve=curve, fit=fit, order=s, predicted_exponent=predicted_exponent)
