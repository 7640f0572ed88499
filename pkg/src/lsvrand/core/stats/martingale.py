"""
Martingale decomposition of Birkhoff sums

G_{ω,0} = 0, G_{ω,k+1} = L_{σ^k ω}(G_{ω,k} + φ_{σ^k ω}) and
H_{ω,k} = φ_{σ^k ω} + G_{ω,k} - G_{ω,k+1} ∘ T_{σ^k ω}, so that
L_{σ^k ω} H_{ω,k} = 0 and
S_{n+1} φ = ∑_{k=0}^{n} H_{ω,k} ∘ T^k + G_{ω,n+1} ∘ T^{n+1}.
Composition with T uses the grid transport P g.
"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..transfer.density import DensityCocycle, DensityVector, integrate
from ..transfer.normalized import compose, normalized_step
from .observables import Observable


@dataclass(frozen=True)
class MartingaleParts:
    """Grid functions of the decomposition starting at shift t.

    Attributes:
        t: Starting shift
        G: G_0, ..., G_{n+1}
        H: H_0, ..., H_n
        phi: φ values at fibers t..t+n
        densities: h_t, ..., h_{t+n+1}
    """

    t: int
    G: List[np.ndarray]
    H: List[np.ndarray]
    phi: List[np.ndarray]
    densities: List[DensityVector]

    @property
    def n(self) -> int:
        return len(self.H) - 1


def martingale_parts(
    cocycle: DensityCocycle, phi: Observable, n: int, t: int = 0
) -> MartingaleParts:
    """G_{ω,k} for k <= n+1 and H_{ω,k} for k <= n along the path from shift t."""
    path = cocycle.path
    densities = cocycle.densities(t, n + 1)
    phis = [phi.fiber_values(densities[k], path.beta(t + k)) for k in range(n + 1)]
    G = [np.zeros(cocycle.grid.n_cells)]
    for k in range(n + 1):
        step = normalized_step(
            cocycle.matrix(t + k), densities[k], densities[k + 1], G[k] + phis[k]
        )
        G.append(step)
    H = [phis[k] + G[k] - compose(cocycle.matrix(t + k), G[k + 1]) for k in range(n + 1)]
    return MartingaleParts(t=t, G=G, H=H, phi=phis, densities=densities)


def martingale_orthogonality_check(
    cocycle: DensityCocycle,
    phi: Observable,
    n: int,
    tests: Sequence[Observable],
    t: int = 0,
) -> float:
    """max over k <= n and test functions f of |∫ (L_k H_k) f dμ_{k+1}|.

    This equals |∫ (H_k ∘ T^k)(f ∘ T^{k+1}) dμ_ω|, which vanishes for a
    martingale difference sequence.
    """
    parts = martingale_parts(cocycle, phi, n, t=t)
    path = cocycle.path
    worst = 0.0
    for k in range(n + 1):
        h, h_next = parts.densities[k], parts.densities[k + 1]
        pushed = normalized_step(cocycle.matrix(t + k), h, h_next, parts.H[k])
        for f in tests:
            values = f.on_grid(cocycle.grid, path.beta(t + k + 1))
            worst = max(worst, abs(integrate(h_next, pushed * values)))
    return worst


def telescoping_residual(
    cocycle: DensityCocycle, phi: Observable, n: int, f: Observable, t: int = 0
) -> float:
    """|∫ [S_{n+1} φ - ∑_{k<=n} H_k ∘ T^k - G_{n+1} ∘ T^{n+1}] f dμ_ω|.

    Each ∫ (g ∘ T^k) f dμ_ω is evaluated as ∫ g · L^k f dμ_{σ^k ω}.
    """
    parts = martingale_parts(cocycle, phi, n, t=t)
    transported = f.on_grid(cocycle.grid, cocycle.path.beta(t))
    residual = 0.0
    for k in range(n + 1):
        h = parts.densities[k]
        residual += integrate(h, (parts.phi[k] - parts.H[k]) * transported)
        transported = normalized_step(cocycle.matrix(t + k), h, parts.densities[k + 1], transported)
    residual -= integrate(parts.densities[n + 1], parts.G[n + 1] * transported)
    return abs(residual)
