"""
Normalized transfer operators

L_ω φ = 𝓛_ω(φ h_ω) / h_{σω} on grid functions, so that L_ω 1 = 1 and
∫ (L_ω φ) f dμ_{σω} = ∫ φ (f ∘ T_ω) dμ_ω.
"""

from typing import Optional, Sequence

import numpy as np

from ...errors import RangeError, ShapeError, SingularDensityError
from .density import DensityCocycle, DensityVector
from .ulam import UlamMatrix


def normalized_step(
    matrix: UlamMatrix, h_from: DensityVector, h_to: DensityVector, g: np.ndarray
) -> np.ndarray:
    """One application of L: 𝓛(g h_from) / h_to.

    Raises:
        SingularDensityError: h_to vanishes on a cell receiving mass
    """
    g = np.asarray(g, dtype=float)
    if g.shape != h_from.values.shape:
        raise ShapeError(f"function has shape {g.shape}, grid has {h_from.values.shape}")
    pushed = matrix.transport(g * h_from.masses)
    denominator = h_to.masses
    bad = np.flatnonzero(denominator <= 0.0)
    if bad.size:
        raise SingularDensityError(
            f"density vanishes on cell {int(bad[0])} ({bad.size} cells in total)", cell=int(bad[0])
        )
    return pushed / denominator


def normalized_push(
    cocycle: DensityCocycle,
    t: int,
    n: int,
    g: np.ndarray,
    densities: Optional[Sequence[DensityVector]] = None,
) -> np.ndarray:
    """L^n_{σ^t ω} g on the grid.

    Args:
        cocycle: Cocycle providing matrices and densities
        t: Starting shift
        n: Number of steps
        g: Cell values of the function at fiber t
        densities: Optional h_t, ..., h_{t+n}; taken from the cocycle otherwise

    Returns:
        Cell values at fiber t + n
    """
    if densities is not None and len(densities) < n + 1:
        raise RangeError(f"need {n + 1} densities, got {len(densities)}")
    values = np.asarray(g, dtype=float)
    for k in range(n):
        h_from = densities[k] if densities is not None else cocycle.density(t + k)
        h_to = densities[k + 1] if densities is not None else cocycle.density(t + k + 1)
        values = normalized_step(cocycle.matrix(t + k), h_from, h_to, values)
    return values


def compose(matrix: UlamMatrix, f: np.ndarray) -> np.ndarray:
    """Grid version of f ∘ T: (P f)_i, exact for cellwise-constant f."""
    return matrix.pull(np.asarray(f, dtype=float))
