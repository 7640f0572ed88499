"""
Densities and the transfer-operator cocycle

Piecewise-constant densities on a grid, their transport through Ulam
matrices, and the pullback approximation h_ω ≈ 𝓛^n_{σ^{-n}ω} 1 of the
equivariant densities along a path.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ...errors import ConfigurationError, RangeError, ShapeError
from ..env.path import EnvironmentPath
from .grid import Grid
from .ulam import UlamFamily, UlamMatrix

logger = logging.getLogger(__name__)

MASS_TOLERANCE = 1e-10
DEFAULT_N_PULL = 2000


@dataclass(frozen=True, eq=False)
class DensityVector:
    """Piecewise-constant function on a grid, usually a probability density.

    Attributes:
        values: One value per cell
        grid: Cell grid
    """

    values: np.ndarray
    grid: Grid

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n_cells,):
            raise ShapeError(f"expected {self.grid.n_cells} cell values, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    @classmethod
    def uniform(cls, grid: Grid) -> "DensityVector":
        return cls(values=np.ones(grid.n_cells), grid=grid)

    @classmethod
    def normalized(cls, values: np.ndarray, grid: Grid) -> "DensityVector":
        """Scale nonnegative cell values to unit mass."""
        values = np.asarray(values, dtype=float)
        if np.any(values < 0.0):
            raise ConfigurationError("density values must be nonnegative")
        mass = float(np.dot(values, grid.widths))
        if mass <= 0.0:
            raise ConfigurationError("density has zero mass")
        return cls(values=values / mass, grid=grid)

    @property
    def masses(self) -> np.ndarray:
        return self.values * self.grid.widths

    def mass(self) -> float:
        return float(self.masses.sum())

    def validate(self) -> None:
        """Check nonnegativity and unit mass within 1e-10."""
        if np.any(self.values < 0.0):
            raise ConfigurationError("density has negative cells")
        if abs(self.mass() - 1.0) > MASS_TOLERANCE:
            raise ConfigurationError(f"density mass {self.mass():.15f} differs from 1")

    def to_frame(self) -> pd.DataFrame:
        """Table with columns cell, left, right, density."""
        b = self.grid.boundaries
        return pd.DataFrame(
            {
                "cell": np.arange(self.grid.n_cells, dtype=np.int64),
                "left": b[:-1],
                "right": b[1:],
                "density": self.values,
            }
        )


def push_density(matrices: Sequence[UlamMatrix], d: DensityVector) -> DensityVector:
    """Transport a density through 𝓛_{m-1} ∘ ... ∘ 𝓛_0, left to right.

    Raises:
        ShapeError: A matrix lives on a different grid
    """
    masses = d.masses
    for matrix in matrices:
        d.grid.require_same(matrix.grid)
        masses = matrix.transport(masses)
    return DensityVector(values=masses / d.grid.widths, grid=d.grid)


def integrate(d: DensityVector, g: np.ndarray) -> float:
    """∑ g_i d_i m(A_i)."""
    g = np.asarray(g, dtype=float)
    if g.shape != d.values.shape:
        raise ShapeError(f"function has shape {g.shape}, density {d.values.shape}")
    return float(np.dot(g, d.masses))


def lp_norm(d: DensityVector, f: np.ndarray, s: float) -> float:
    """(∑ |f_i|^s d_i m(A_i))^{1/s}; s = inf gives the essential supremum."""
    f = np.asarray(f, dtype=float)
    if f.shape != d.values.shape:
        raise ShapeError(f"function has shape {f.shape}, density {d.values.shape}")
    if s < 1.0:
        raise ConfigurationError("L^s norms need s >= 1")
    if np.isinf(s):
        support = d.masses > 0.0
        return float(np.abs(f[support]).max()) if support.any() else 0.0
    return float(np.dot(np.abs(f) ** s, d.masses) ** (1.0 / s))


def l1_distance(d1: DensityVector, d2: DensityVector) -> float:
    """∫ |d1 - d2| dm."""
    d1.grid.require_same(d2.grid)
    return float(np.dot(np.abs(d1.values - d2.values), d1.grid.widths))


@dataclass(frozen=True)
class DensityEstimate:
    """Pullback approximation with its convergence report.

    Attributes:
        density: h^{(n_pull)} at the requested shift
        n_pull: Pullback length
        l1_defect: ‖h^{(n_pull)} - h^{(n_pull/2)}‖_{L¹}
    """

    density: DensityVector
    n_pull: int
    l1_defect: float


class DensityCocycle:
    """Ulam cocycle along a path with its equivariant densities.

    The uniform density is placed at the anchor shift t0 - n_pull and pushed
    forward one step at a time, so h_t is h^{(n_pull + t - t0)}_t for every
    t >= t0. Densities are always produced by the same chain of operations,
    whatever order they are requested in.
    """

    def __init__(
        self,
        path: EnvironmentPath,
        grid: Grid,
        n_pull: int = DEFAULT_N_PULL,
        family: Optional[UlamFamily] = None,
        t0: int = 0,
        memory: int = 64,
    ):
        """Initialize the cocycle.

        Args:
            path: Environment path
            grid: Cell grid
            n_pull: Pullback length at the first shift t0
            family: Shared matrix family, created on demand
            t0: First shift densities are requested at
            memory: Number of densities kept for random access
        """
        if n_pull < 0:
            raise ConfigurationError("n_pull must be nonnegative")
        path.require(t0 - n_pull, t0)
        self.path = path
        self.grid = grid
        self.n_pull = n_pull
        self.t0 = t0
        self.family = family or UlamFamily(grid)
        if not self.family.grid.same_as(grid):
            raise ShapeError("matrix family and cocycle use different grids")
        self._memory = max(memory, 1)
        self._densities: "OrderedDict[int, DensityVector]" = OrderedDict()
        self._latest: Optional[Tuple[int, DensityVector]] = None

    def matrix(self, t: int) -> UlamMatrix:
        """Ulam matrix of T_{σ^t ω}."""
        return self.family(self.path.beta(t))

    def matrices(self, t: int, n: int) -> List[UlamMatrix]:
        return [self.matrix(k) for k in range(t, t + n)]

    def pullback(self, t: int, n: int) -> DensityVector:
        """𝓛^n_{σ^{t-n} ω} 1."""
        self.path.require(t - n, t)
        return push_density(self.matrices(t - n, n), DensityVector.uniform(self.grid))

    def estimate(self, t: int) -> DensityEstimate:
        """h_t with the convergence report ‖h^{(n)} - h^{(n/2)}‖_{L¹}."""
        density = self.density(t)
        n = self.n_pull + t - self.t0
        defect = l1_distance(density, self.pullback(t, n // 2))
        logger.debug("Pullback defect at t=%d: %.3e", t, defect)
        return DensityEstimate(density=density, n_pull=n, l1_defect=defect)

    def density(self, t: int) -> DensityVector:
        """Equivariant density approximation at shift t >= t0."""
        if t < self.t0:
            raise RangeError(f"densities start at t0={self.t0}, requested t={t}")
        if t in self._densities:
            return self._densities[t]
        start, current = self.t0 - self.n_pull, DensityVector.uniform(self.grid)
        for s, d in list(self._densities.items()) + ([self._latest] if self._latest else []):
            if start < s <= t:
                start, current = s, d
        for s in range(start, t):
            current = push_density([self.matrix(s)], current)
        self._remember(t, current)
        return current

    def iter_densities(self, t0: int, n: int) -> Iterator[Tuple[int, DensityVector]]:
        """Yield (t, h_t) for t = t0, ..., t0 + n."""
        for t in range(t0, t0 + n + 1):
            yield t, self.density(t)

    def densities(self, t0: int, n: int) -> List[DensityVector]:
        return [d for _, d in self.iter_densities(t0, n)]

    def _remember(self, t: int, density: DensityVector) -> None:
        self._densities[t] = density
        while len(self._densities) > self._memory:
            self._densities.popitem(last=False)
        if self._latest is None or t > self._latest[0]:
            self._latest = (t, density)


def equivariant_density(
    path: EnvironmentPath, t: int, n_pull: int, grid: Grid, family: Optional[UlamFamily] = None
) -> DensityEstimate:
    """h_{σ^t ω}^{(n_pull)} = 𝓛^{n_pull}_{σ^{t-n_pull} ω} 1 with its convergence report.

    Raises:
        RangeError: The path does not reach back to t - n_pull
    """
    return DensityCocycle(path, grid, n_pull=n_pull, family=family, t0=t).estimate(t)


def tv_distance_curve(
    cocycle: DensityCocycle, d1: DensityVector, d2: DensityVector, t: int, n_max: int
) -> Tuple[np.ndarray, np.ndarray]:
    """L¹ distance between two densities pushed along the path from shift t.

    Returns:
        (n, distance) arrays for n = 0..n_max
    """
    distances = np.empty(n_max + 1)
    distances[0] = l1_distance(d1, d2)
    for k in range(1, n_max + 1):
        matrix = cocycle.matrix(t + k - 1)
        d1 = push_density([matrix], d1)
        d2 = push_density([matrix], d2)
        distances[k] = l1_distance(d1, d2)
    return np.arange(n_max + 1), distances


def cone_report(d: DensityVector, beta: float) -> Dict[str, float]:
    """Empirical cone checks for an equivariant density of T_β.

    Returns:
        decreasing: 1.0 if cell values never increase (relative 1e-9)
        max_increase: Largest relative increase between neighbours
        weighted_increasing: 1.0 if x^{β+1} h is nondecreasing at midpoints
        a_fit: Smallest a with ∫_0^x h ≤ a x^{1-β} ∫ h at all boundaries
        min_on_y: Smallest cell value on [1/2, 1]
        global_min: Smallest cell value
    """
    values = d.values
    steps = np.diff(values) / np.maximum(np.abs(values[:-1]), 1e-300)
    weighted = np.power(d.grid.midpoints, beta + 1.0) * values
    weighted_steps = np.diff(weighted) / np.maximum(np.abs(weighted[:-1]), 1e-300)
    b = d.grid.boundaries[1:]
    cumulative = np.cumsum(d.masses)
    a_fit = float(np.max(cumulative / (np.power(b, 1.0 - beta) * cumulative[-1])))
    return {
        "decreasing": float(np.all(steps <= 1e-9)),
        "max_increase": float(max(steps.max(), 0.0)),
        "weighted_increasing": float(np.all(weighted_steps >= -1e-9)),
        "a_fit": a_fit,
        "min_on_y": float(values[d.grid.half_index :].min()),
        "global_min": float(values.min()),
    }
