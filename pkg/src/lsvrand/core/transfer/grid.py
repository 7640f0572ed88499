"""
Cell grids on [0, 1]

Grids always carry 1/2 as a boundary so that no cell straddles the branch
discontinuity. The geometric-refined kind concentrates cells near the
indifferent fixed point, where equivariant densities blow up like x^{-β}.
"""

from dataclasses import dataclass

import numpy as np

from ...errors import ConfigurationError, ShapeError


@dataclass(frozen=True, eq=False)
class Grid:
    """Strictly increasing cell boundaries 0 = b_0 < ... < b_N = 1.

    Attributes:
        boundaries: Read-only boundary array of length N + 1
        kind: uniform or geometric
        refine_exponent: κ of the geometric kind (1.0 for uniform)
    """

    boundaries: np.ndarray
    kind: str = "uniform"
    refine_exponent: float = 1.0

    def __post_init__(self) -> None:
        b = np.array(self.boundaries, dtype=float)
        if b.ndim != 1 or b.size < 3:
            raise ConfigurationError("a grid needs at least two cells")
        if b[0] != 0.0 or b[-1] != 1.0 or np.any(np.diff(b) <= 0.0):
            raise ConfigurationError("grid boundaries must increase strictly from 0 to 1")
        if not np.any(b == 0.5):
            raise ConfigurationError("1/2 must be a grid boundary")
        b.flags.writeable = False
        object.__setattr__(self, "boundaries", b)

    @classmethod
    def uniform(cls, n_cells: int) -> "Grid":
        """N equal cells; for odd N the boundary 1/2 is inserted."""
        if n_cells < 2:
            raise ConfigurationError("n_cells must be at least 2")
        b = np.linspace(0.0, 1.0, n_cells + 1)
        if n_cells % 2 == 0:
            b[n_cells // 2] = 0.5
        else:
            b = np.union1d(b, [0.5])
        return cls(boundaries=b, kind="uniform", refine_exponent=1.0)

    @classmethod
    def geometric(cls, n_cells: int, refine_exponent: float = 2.0) -> "Grid":
        """N/2 cells 0.5 (i/(N/2))^κ on [0, 1/2], N/2 equal cells on [1/2, 1]."""
        if n_cells < 2 or n_cells % 2:
            raise ConfigurationError("geometric grids need an even n_cells >= 2")
        if refine_exponent < 1.0:
            raise ConfigurationError("refine_exponent must be >= 1")
        half = n_cells // 2
        i = np.arange(half + 1) / half
        left = 0.5 * np.power(i, refine_exponent)
        right = 0.5 + 0.5 * i[1:]
        b = np.concatenate([left, right])
        b[half] = 0.5
        b[-1] = 1.0
        return cls(boundaries=b, kind="geometric", refine_exponent=float(refine_exponent))

    @classmethod
    def from_kind(cls, kind: str, n_cells: int, refine_exponent: float = 2.0) -> "Grid":
        if kind == "uniform":
            return cls.uniform(n_cells)
        if kind == "geometric":
            return cls.geometric(n_cells, refine_exponent)
        raise ConfigurationError(f"unknown grid kind '{kind}'")

    @property
    def n_cells(self) -> int:
        return self.boundaries.size - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.boundaries)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.boundaries[:-1] + self.boundaries[1:])

    @property
    def half_index(self) -> int:
        """Index of the first cell in [1/2, 1]."""
        return int(np.flatnonzero(self.boundaries == 0.5)[0])

    @property
    def descriptor(self) -> str:
        if self.kind == "geometric":
            return f"geometric:{self.n_cells}:{self.refine_exponent:.12g}"
        return f"{self.kind}:{self.n_cells}"

    def locate(self, x: np.ndarray) -> np.ndarray:
        """Cell index of each point; 1 is placed in the last cell."""
        index = np.searchsorted(self.boundaries, np.asarray(x, dtype=float), side="right") - 1
        return np.clip(index, 0, self.n_cells - 1)

    def same_as(self, other: "Grid") -> bool:
        return self is other or (
            self.descriptor == other.descriptor
            and np.array_equal(self.boundaries, other.boundaries)
        )

    def require_same(self, other: "Grid") -> None:
        if not self.same_as(other):
            raise ShapeError(f"grid mismatch: {self.descriptor} vs {other.descriptor}")
