"""
Annealed statistics

Correlations ∫ φ · (φ ∘ τⁿ) dμ of the skew product, estimated by averaging
quenched correlations over independently sampled environment paths, and the
annealed variance series Σ² = c_0 + 2 ∑_{n>=1} c_n.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from ...errors import RangeError
from ..env.laws import ParameterLaw
from ..env.path import sample_path
from ..env.seeds import derive_seed, make_rng
from ..lsv.maps import advance
from ..transfer.density import DensityCocycle, integrate
from ..transfer.grid import Grid
from ..transfer.normalized import normalized_step
from ..transfer.ulam import UlamFamily
from .curves import Estimate, ExponentFit, fit_exponent
from .observables import Observable
from .quenched import METHODS, _check_method
from .sampling import fiber_offsets, sample_from_density

logger = logging.getLogger(__name__)

SAMPLE_STREAM = 2


@dataclass(frozen=True, eq=False)
class AnnealedCorrelations:
    """c_n for n = 0..n_max with replica-based standard errors.

    Attributes:
        value: Mean over paths of the quenched correlations
        stderr: Standard error across paths
        replicas: Array (n_paths, n_max + 1) of per-path correlations
        method: operator or monte-carlo
    """

    value: np.ndarray
    stderr: np.ndarray
    replicas: np.ndarray
    method: str

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.value.size)

    def __getitem__(self, n: int) -> Estimate:
        return Estimate(value=float(self.value[n]), stderr=float(self.stderr[n]))

    def to_frame(self) -> pd.DataFrame:
        """Table with columns n, value, stderr, method."""
        return pd.DataFrame(
            {
                "n": self.n.astype(np.int64),
                "value": self.value,
                "stderr": self.stderr,
                "method": [self.method] * self.value.size,
            }
        )


def _replica_correlations(
    law: ParameterLaw,
    phi: Observable,
    n_max: int,
    n_samples: int,
    seed: int,
    replica: int,
    grid: Grid,
    n_pull: int,
    family: UlamFamily,
    method: str,
) -> np.ndarray:
    replica_seed = derive_seed(seed, replica)
    path = sample_path(law, n_pull, n_max, replica_seed)
    cocycle = DensityCocycle(path, grid, n_pull=n_pull, family=family)
    betas = path.window(0, n_max + 1)

    if method == "operator":
        phi_0 = phi.fiber_values(cocycle.density(0), betas[0])
        f = phi_0
        out = np.empty(n_max + 1)
        for n in range(n_max + 1):
            h = cocycle.density(n)
            out[n] = integrate(h, f * phi.fiber_values(h, betas[n]))
            if n < n_max:
                f = normalized_step(cocycle.matrix(n), h, cocycle.density(n + 1), f)
        return out

    offsets = fiber_offsets(cocycle, phi, 0, n_max + 1)
    rng = make_rng(replica_seed, SAMPLE_STREAM)
    x = sample_from_density(cocycle.density(0), n_samples, rng)
    first = phi.evaluate(x, betas[0]) - offsets[0]
    out = np.empty(n_max + 1)
    for n in range(n_max + 1):
        if n > 0:
            x = advance(betas[n - 1], x, rng)
        out[n] = float(np.mean(first * (phi.evaluate(x, betas[n]) - offsets[n])))
    return out


def annealed_correlations(
    law: ParameterLaw,
    phi: Observable,
    n_max: int,
    n_paths: int,
    n_samples: int,
    seed: int,
    grid: Grid,
    n_pull: int,
    method: str = "monte-carlo",
    threads: int = 1,
    family: Optional[UlamFamily] = None,
) -> AnnealedCorrelations:
    """Correlations c_0..c_{n_max} averaged over n_paths sampled environments.

    Path k is sampled with seed derived from (seed, k); within a path the
    Monte Carlo method draws n_samples initial points from μ_ω.
    """
    _check_method(method)
    if n_paths < 1:
        raise RangeError("n_paths must be at least 1")
    family = family or UlamFamily(grid)
    rows: List[np.ndarray] = Parallel(n_jobs=threads, prefer="threads")(
        delayed(_replica_correlations)(
            law, phi, n_max, n_samples, seed, k, grid, n_pull, family, method
        )
        for k in range(n_paths)
    )
    replicas = np.vstack(rows)
    value = replicas.mean(axis=0)
    if n_paths > 1:
        stderr = replicas.std(axis=0, ddof=1) / np.sqrt(n_paths)
    else:
        stderr = np.zeros_like(value)
    return AnnealedCorrelations(value=value, stderr=stderr, replicas=replicas, method=method)


def annealed_correlation(
    law: ParameterLaw,
    phi: Observable,
    n: int,
    n_paths: int,
    n_samples: int,
    seed: int,
    grid: Grid,
    n_pull: int,
    method: str = "monte-carlo",
    threads: int = 1,
) -> Estimate:
    """∫ φ · (φ ∘ τⁿ) dμ averaged over sampled environments."""
    curve = annealed_correlations(
        law, phi, n, n_paths, n_samples, seed, grid, n_pull, method=method, threads=threads
    )
    return curve[n]


@dataclass(frozen=True)
class AnnealedVariance:
    """Truncated variance series with its tail estimate.

    Attributes:
        value: Σ² estimate, None when the fitted decay is not summable
        stderr: Spread of the truncated sum across paths
        truncation_error: Size of the estimated tail beyond n_max
        summable: False when the fitted slope is >= -1
        fit: Power-law fit of |c_n| used for the tail, if any
    """

    value: Optional[float]
    stderr: float
    truncation_error: float
    summable: bool
    fit: Optional[ExponentFit] = None
    correlations: Optional[AnnealedCorrelations] = field(default=None, repr=False)


def variance_from_correlations(
    correlations: AnnealedCorrelations, fit_lo: int = 5
) -> AnnealedVariance:
    """Σ² = c_0 + 2 ∑ c_n with a power-law tail fitted on |c_n|, n >= fit_lo."""
    c = correlations.value
    n_max = c.size - 1
    per_path = correlations.replicas[:, 0] + 2.0 * correlations.replicas[:, 1:].sum(axis=1)
    truncated = float(c[0] + 2.0 * c[1:].sum())
    stderr = (
        float(per_path.std(ddof=1) / np.sqrt(per_path.size)) if per_path.size > 1 else 0.0
    )

    fit = None
    if n_max >= fit_lo + 1:
        try:
            fit = fit_exponent(
                correlations.n[1:], np.abs(c[1:]), correlations.stderr[1:], n_lo=fit_lo
            )
        except RangeError:
            fit = None

    if fit is None:
        tail_error = 2.0 * abs(float(c[-1])) if n_max >= 1 else 0.0
        return AnnealedVariance(
            value=truncated,
            stderr=stderr,
            truncation_error=tail_error,
            summable=True,
            correlations=correlations,
        )
    if fit.slope >= -1.0:
        logger.warning("Fitted correlation decay slope %.3f is not summable", fit.slope)
        return AnnealedVariance(
            value=None,
            stderr=stderr,
            truncation_error=float("inf"),
            summable=False,
            fit=fit,
            correlations=correlations,
        )
    amplitude = float(np.exp(fit.intercept))
    tail = 2.0 * amplitude * (n_max + 0.5) ** (fit.slope + 1.0) / (-fit.slope - 1.0)
    sign = 1.0 if c[-1] >= 0.0 else -1.0
    return AnnealedVariance(
        value=truncated + sign * tail,
        stderr=stderr,
        truncation_error=abs(tail),
        summable=True,
        fit=fit,
        correlations=correlations,
    )


def annealed_variance(
    law: ParameterLaw,
    phi: Observable,
    n_max: int,
    n_paths: int,
    n_samples: int,
    seed: int,
    grid: Grid,
    n_pull: int,
    method: str = "monte-carlo",
    threads: int = 1,
    fit_lo: int = 5,
) -> AnnealedVariance:
    """Annealed Σ² from the truncated correlation series plus a fitted tail."""
    correlations = annealed_correlations(
        law, phi, n_max, n_paths, n_samples, seed, grid, n_pull, method=method, threads=threads
    )
    return variance_from_correlations(correlations, fit_lo=fit_lo)


__all__ = [
    "METHODS",
    "AnnealedCorrelations",
    "AnnealedVariance",
    "annealed_correlations",
    "annealed_correlation",
    "annealed_variance",
    "variance_from_correlations",
]
