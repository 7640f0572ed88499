"""
Monte Carlo orbit sampling

Initial points are drawn from μ_ω by inverse CDF of the grid density, then
followed in exact map arithmetic. Samples are produced in fixed-size blocks,
block b using the generator derived from (seed, b), so the output does not
depend on the number of worker threads.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from ...errors import RangeError
from ..env.seeds import make_rng, sample_blocks
from ..lsv.maps import advance
from ..transfer.density import DensityCocycle, DensityVector
from .observables import Observable

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_SIZE = 1 << 16


def sample_from_density(d: DensityVector, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw points from the piecewise-constant density d (exact within the grid model)."""
    masses = d.masses
    cumulative = np.cumsum(masses)
    total = cumulative[-1]
    u = rng.random(size) * total
    cells = np.minimum(np.searchsorted(cumulative, u, side="right"), d.grid.n_cells - 1)
    before = cumulative[cells] - masses[cells]
    fraction = np.divide(u - before, masses[cells], out=np.zeros(size), where=masses[cells] > 0)
    b = d.grid.boundaries
    x = b[cells] + np.clip(fraction, 0.0, 1.0) * (b[cells + 1] - b[cells])
    return np.minimum(x, 1.0)


def fiber_offsets(cocycle: DensityCocycle, phi: Observable, t: int, n: int) -> np.ndarray:
    """Centering offsets μ_{t+k}(φ_{t+k}) for k = 0..n-1 (zeros if uncentered)."""
    if not phi.centered:
        return np.zeros(n)
    return np.array(
        [phi.fiber_mean(cocycle.density(t + k), cocycle.path.beta(t + k)) for k in range(n)]
    )


def _birkhoff_block(
    density: DensityVector,
    betas: np.ndarray,
    offsets: np.ndarray,
    phi: Observable,
    checkpoints: np.ndarray,
    size: int,
    seed: int,
    block: int,
) -> np.ndarray:
    rng = make_rng(seed, block)
    x = sample_from_density(density, size, rng)
    sums = np.zeros(size)
    out = np.empty((checkpoints.size, size))
    slot = 0
    for k, beta in enumerate(betas):
        sums += phi.evaluate(x, beta) - offsets[k]
        if slot < checkpoints.size and checkpoints[slot] == k + 1:
            out[slot] = sums
            slot += 1
        x = advance(beta, x, rng)
    return out


def birkhoff_samples(
    cocycle: DensityCocycle,
    phi: Observable,
    n: int,
    n_samples: int,
    seed: int,
    t: int = 0,
    checkpoints: Optional[Sequence[int]] = None,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> np.ndarray:
    """Samples of S_n^ω φ = ∑_{j<n} φ_{σ^j ω} ∘ T_ω^j with x ~ μ_{σ^t ω}.

    Args:
        cocycle: Cocycle providing h_t and the centering offsets
        phi: Observable
        n: Number of terms
        n_samples: Number of initial points
        seed: Base seed
        t: Starting shift
        checkpoints: Also return the partial sums at these n (sorted, <= n)
        threads: Worker threads
        block_size: Samples per block

    Returns:
        Array (n_samples,) of S_n, or (len(checkpoints), n_samples) when
        checkpoints are given
    """
    points = np.array(sorted(set(checkpoints)) if checkpoints else [n], dtype=np.int64)
    if points.size and (points[0] < 1 or points[-1] > n):
        raise RangeError(f"checkpoints must lie in [1, {n}]")
    if n == 0:
        zeros = np.zeros(n_samples)
        return zeros if checkpoints is None else np.zeros((0, n_samples))
    betas = cocycle.path.window(t, t + n)
    offsets = fiber_offsets(cocycle, phi, t, n)
    density = cocycle.density(t)
    blocks = list(sample_blocks(n_samples, block_size))
    logger.debug("Birkhoff sampling: n=%d, %d samples in %d blocks", n, n_samples, len(blocks))
    results: List[np.ndarray] = Parallel(n_jobs=threads, prefer="threads")(
        delayed(_birkhoff_block)(density, betas, offsets, phi, points, stop - start, seed, index)
        for index, start, stop in blocks
    )
    samples = np.concatenate(results, axis=1) if results else np.zeros((points.size, 0))
    return samples[0] if checkpoints is None else samples


def _product_block(
    density: DensityVector,
    betas: np.ndarray,
    phi: Observable,
    psi: Observable,
    offset_phi: float,
    offset_psi: float,
    beta_start: float,
    beta_end: float,
    size: int,
    seed: int,
    block: int,
) -> np.ndarray:
    rng = make_rng(seed, block)
    x = sample_from_density(density, size, rng)
    first = phi.evaluate(x, beta_start) - offset_phi
    for beta in betas:
        x = advance(beta, x, rng)
    return first * (psi.evaluate(x, beta_end) - offset_psi)


def correlation_samples(
    cocycle: DensityCocycle,
    phi: Observable,
    psi: Observable,
    t: int,
    n: int,
    n_samples: int,
    seed: int,
    threads: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> np.ndarray:
    """Samples of φ_{σ^t ω}(x) · ψ_{σ^{t+n} ω}(T^n x) with x ~ μ_{σ^t ω}."""
    betas = cocycle.path.window(t, t + n)
    beta_start = cocycle.path.beta(t)
    beta_end = cocycle.path.beta(t + n)
    offset_phi = phi.fiber_mean(cocycle.density(t), beta_start)
    offset_psi = psi.fiber_mean(cocycle.density(t + n), beta_end)
    density = cocycle.density(t)
    results = Parallel(n_jobs=threads, prefer="threads")(
        delayed(_product_block)(
            density,
            betas,
            phi,
            psi,
            offset_phi,
            offset_psi,
            beta_start,
            beta_end,
            stop - start,
            seed,
            index,
        )
        for index, start, stop in sample_blocks(n_samples, block_size)
    )
    return np.concatenate(results) if results else np.zeros(0)
