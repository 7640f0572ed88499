"""
Ulam discretization of the transfer operator

P[i, j] = m(A_i ∩ T_β^{-1} A_j) / m(A_i), assembled exactly from the branch
inverses: the preimage of a cell is one interval under the left branch
(through left_inverse) and one under the right branch ((b + 1)/2). Matrices
are stored sparse; a dense binary dump is available for caching.
"""

import hashlib
import logging
import os
import struct
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
from scipy import sparse

from ...errors import ConfigurationError, ShapeError
from ..lsv.maps import left_inverse
from .grid import Grid

logger = logging.getLogger(__name__)

DUMP_MAGIC = b"ULAM1"


@dataclass(frozen=True, eq=False)
class UlamMatrix:
    """Row-stochastic Ulam matrix of T_β on a grid.

    Attributes:
        beta: Map parameter
        grid: Cell grid
        matrix: CSR matrix P
    """

    beta: float
    grid: Grid
    matrix: sparse.csr_matrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "_transposed", self.matrix.T.tocsr())

    @property
    def n_cells(self) -> int:
        return self.grid.n_cells

    def transport(self, masses: np.ndarray) -> np.ndarray:
        """Push cell masses forward: q' = Pᵀ q."""
        return self._transposed @ masses

    def pull(self, values: np.ndarray) -> np.ndarray:
        """Composition with T on cell functions: (f ∘ T)_i = (P f)_i."""
        return self.matrix @ values

    def row_sum_defect(self) -> float:
        return float(np.abs(np.asarray(self.matrix.sum(axis=1)).ravel() - 1.0).max())

    def to_frame(self) -> pd.DataFrame:
        """Nonzero entries with columns i, j, value."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return pd.DataFrame(
            {
                "i": coo.row[order].astype(np.int64),
                "j": coo.col[order].astype(np.int64),
                "value": coo.data[order],
            }
        )

    def dump(self, path: str) -> None:
        """Write magic, little-endian uint64 N, then the dense row-major float64 matrix."""
        dense = np.ascontiguousarray(self.matrix.toarray(), dtype="<f8")
        with open(path, "wb") as handle:
            handle.write(DUMP_MAGIC)
            handle.write(struct.pack("<Q", self.n_cells))
            handle.write(dense.tobytes(order="C"))

    @classmethod
    def load(cls, path: str, beta: float, grid: Grid) -> "UlamMatrix":
        with open(path, "rb") as handle:
            magic = handle.read(len(DUMP_MAGIC))
            if magic != DUMP_MAGIC:
                raise ConfigurationError(f"{path} is not an Ulam dump")
            (n,) = struct.unpack("<Q", handle.read(8))
            if n != grid.n_cells:
                raise ShapeError(f"dump has {n} cells, grid has {grid.n_cells}")
            dense = np.frombuffer(handle.read(8 * n * n), dtype="<f8").reshape(n, n)
        return cls(beta=beta, grid=grid, matrix=sparse.csr_matrix(dense))


def _branch_entries(
    cell_bounds: np.ndarray,
    preimage_bounds: np.ndarray,
    grid: Grid,
    row_offset: int,
):
    """Overlaps of grid cells with preimage cells on one branch."""
    points = np.union1d(cell_bounds, preimage_bounds)
    lengths = np.diff(points)
    mids = 0.5 * (points[:-1] + points[1:])
    keep = lengths > 0.0
    rows = np.searchsorted(cell_bounds, mids[keep], side="right") - 1 + row_offset
    cols = np.searchsorted(preimage_bounds, mids[keep], side="right") - 1
    cols = np.clip(cols, 0, grid.n_cells - 1)
    return rows, cols, lengths[keep]


def ulam_matrix(beta: float, grid: Grid) -> UlamMatrix:
    """Assemble the Ulam matrix of T_β on ``grid``.

    Args:
        beta: Parameter in [0, 1)
        grid: Cell grid with 1/2 as a boundary

    Returns:
        UlamMatrix with rows summing to 1
    """
    if not 0.0 <= beta < 1.0:
        raise ConfigurationError(f"beta must lie in [0, 1), got {beta}")
    b = grid.boundaries
    half = grid.half_index
    left_pre = np.asarray(left_inverse(beta, b), dtype=float)
    left_pre[0], left_pre[-1] = 0.0, 0.5
    right_pre = 0.5 * (b + 1.0)
    right_pre[0], right_pre[-1] = 0.5, 1.0

    rows_l, cols_l, len_l = _branch_entries(b[: half + 1], left_pre, grid, 0)
    rows_r, cols_r, len_r = _branch_entries(b[half:], right_pre, grid, half)
    rows = np.concatenate([rows_l, rows_r])
    cols = np.concatenate([cols_l, cols_r])
    values = np.concatenate([len_l, len_r]) / grid.widths[rows]

    n = grid.n_cells
    matrix = sparse.coo_matrix((values, (rows, cols)), shape=(n, n)).tocsr()
    matrix.sum_duplicates()
    logger.debug(
        "Assembled Ulam matrix beta=%s on %s (%d nonzeros)", beta, grid.descriptor, matrix.nnz
    )
    return UlamMatrix(beta=float(beta), grid=grid, matrix=matrix)


def cache_key(beta: float, grid: Grid) -> str:
    """Cache key from β rounded to 1e-12 and the grid descriptor."""
    text = f"{round(beta, 12):.12f}|{grid.descriptor}"
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class UlamFamily:
    """Memoized Ulam matrices on one grid, optionally cached on disk."""

    def __init__(
        self, grid: Grid, cache_dir: Optional[str] = None, max_in_memory: int = 512
    ):
        """Initialize the family.

        Args:
            grid: Grid shared by every matrix
            cache_dir: Directory for binary dumps, or None for memory only
            max_in_memory: Matrices kept in memory; the least recently used is evicted first
        """
        self.grid = grid
        self.cache_dir = cache_dir
        self.max_in_memory = max_in_memory
        self._matrices: "OrderedDict[float, UlamMatrix]" = OrderedDict()
        if cache_dir:
            os.makedirs(cache_dir, exist_ok=True)

    def __call__(self, beta: float) -> UlamMatrix:
        beta = float(beta)
        if beta in self._matrices:
            self._matrices.move_to_end(beta)
            return self._matrices[beta]
        matrix = self._from_cache(beta)
        if matrix is None:
            matrix = ulam_matrix(beta, self.grid)
            if self.cache_dir:
                matrix.dump(self._cache_path(beta))
        if len(self._matrices) >= self.max_in_memory:
            self._matrices.popitem(last=False)
        self._matrices[beta] = matrix
        return matrix

    def __len__(self) -> int:
        return len(self._matrices)

    def _cache_path(self, beta: float) -> str:
        return os.path.join(self.cache_dir or "", f"{cache_key(beta, self.grid)}.ulam")

    def _from_cache(self, beta: float) -> Optional[UlamMatrix]:
        if not self.cache_dir:
            return None
        path = self._cache_path(beta)
        if not os.path.exists(path):
            return None
        logger.debug("Loading cached Ulam matrix %s", path)
        return UlamMatrix.load(path, beta, self.grid)
