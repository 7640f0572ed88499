"""
Return-time structure

For Y = [1/2, 1] the first return time τ_ω(x) = inf{n >= 1 : T_ω^n x ∈ Y} is
constant on the intervals of the partition built from the preimages
x_n(ω) = T_ω^{-n}(1) of the left branch and y_n(ω) = (x_{n-1}(σω) + 1)/2.
The tail u_ω(n) of τ under normalized Lebesgue measure on Y equals
x_{n-1}(σω) exactly.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from ...errors import RangeError
from ..env.path import EnvironmentPath
from .maps import advance, left_inverse

logger = logging.getLogger(__name__)

UNDERFLOW_FLOOR = 1e-300
DEFAULT_DEPTH = 10_000


def return_times(
    path: EnvironmentPath, xs: np.ndarray, cap: Optional[int] = None, t: int = 0
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized first return times to Y along the path from shift t.

    Args:
        path: Environment path
        xs: Starting points in [0, 1]
        cap: Maximum number of steps, default the forward window length
        t: Starting shift

    Returns:
        (times, capped); times are 0 where capped
    """
    if cap is None:
        cap = path.t_max - t + 1
    betas = path.window(t, t + cap)
    x = np.array(xs, dtype=float, ndmin=1)
    times = np.zeros(x.size, dtype=np.int64)
    alive = np.arange(x.size)
    current = x.copy()
    for k, beta in enumerate(betas, start=1):
        current = advance(beta, current)
        hit = current >= 0.5
        times[alive[hit]] = k
        alive = alive[~hit]
        current = current[~hit]
        if alive.size == 0:
            break
    capped = times == 0
    return times, capped


def return_time(
    path: EnvironmentPath, x: float, cap: Optional[int] = None, t: int = 0
) -> Tuple[int, bool]:
    """First return time of a single point; (value, capped)."""
    times, capped = return_times(path, np.array([x]), cap=cap, t=t)
    return int(times[0]), bool(capped[0])


@dataclass(frozen=True, eq=False)
class ReturnStructure:
    """Preimage tables of the return partition.

    Attributes:
        path: Path the tables were built on
        t_min: First tabulated shift
        t_max: Last shift with complete x, y and u tables
        x: Array (depth+1, t_max-t_min+2); x[n, k] = x_n(σ^{t_min+k} ω)
        depth: Largest tabulated n
        truncated: True if the depth was cut at the underflow floor
    """

    path: EnvironmentPath
    t_min: int
    t_max: int
    x: np.ndarray
    depth: int
    truncated: bool = False

    def _column(self, t: int) -> int:
        if not self.t_min <= t <= self.t_max + 1:
            raise RangeError(f"shift {t} outside tabulated range [{self.t_min}, {self.t_max}]")
        return t - self.t_min

    def x_at(self, n: int, t: int) -> float:
        if not 0 <= n <= self.depth:
            raise RangeError(f"n={n} exceeds depth {self.depth}")
        return float(self.x[n, self._column(t)])

    def y_at(self, n: int, t: int) -> float:
        """y_n(σ^t ω) for 1 <= n <= depth."""
        if not 1 <= n <= self.depth:
            raise RangeError(f"y_n needs 1 <= n <= {self.depth}, got {n}")
        if t > self.t_max:
            raise RangeError(f"shift {t} outside tabulated range [{self.t_min}, {self.t_max}]")
        return 0.5 * (self.x[n - 1, self._column(t + 1)] + 1.0)

    def xs(self, t: int) -> np.ndarray:
        """x_0, ..., x_depth at shift t."""
        return self.x[:, self._column(t)]

    def ys(self, t: int) -> np.ndarray:
        """y_0, ..., y_depth at shift t, with y_0 := 1 as a sentinel."""
        if t > self.t_max:
            raise RangeError(f"shift {t} outside tabulated range [{self.t_min}, {self.t_max}]")
        following = self.x[:, self._column(t + 1)]
        return np.concatenate([[1.0], 0.5 * (following[:-1] + 1.0)])

    def tails(self, t: int) -> np.ndarray:
        """u(0), u(1), ..., u(depth) at shift t, with u(0) = 1."""
        if t > self.t_max:
            raise RangeError(f"shift {t} outside tabulated range [{self.t_min}, {self.t_max}]")
        following = self.x[:, self._column(t + 1)]
        return np.concatenate([[1.0], following[:-1]])

    def to_frame(self) -> pd.DataFrame:
        """Table with columns t, n, x_n, y_n, u_n for n = 1..depth."""
        frames = []
        n = np.arange(1, self.depth + 1, dtype=np.int64)
        for t in range(self.t_min, self.t_max + 1):
            u = self.tails(t)[1:]
            frames.append(
                pd.DataFrame(
                    {
                        "t": np.full(n.size, t, dtype=np.int64),
                        "n": n,
                        "x_n": self.xs(t)[1:],
                        "y_n": 0.5 * (u + 1.0),
                        "u_n": u,
                    }
                )
            )
        return pd.concat(frames, ignore_index=True)


def build_return_structure(
    path: EnvironmentPath, depth: int = DEFAULT_DEPTH, t_min: int = 0, t_max: int = 0
) -> ReturnStructure:
    """Tabulate x_n, y_n for shifts t_min..t_max up to the given depth.

    Uses x_0 = 1 and x_n(σ^t ω) = left_inverse(β_t, x_{n-1}(σ^{t+1} ω)). The
    path must cover shifts t_min..t_max+depth. Values falling below 1e-300
    cut the depth and set the truncated flag.
    """
    if depth < 1:
        raise RangeError("depth must be at least 1")
    path.require(t_min, t_max + depth + 1)
    width = t_max - t_min + 2
    table = np.empty((depth + 1, width))
    table[0] = 1.0
    truncated = False

    betas = path.window(t_min, t_max + depth + 1)
    if betas.min() == betas.max():
        beta = float(betas[0])
        value = 1.0
        reached = depth
        for n in range(1, depth + 1):
            value = float(left_inverse(beta, value))
            if value < UNDERFLOW_FLOOR:
                reached, truncated = n - 1, True
                break
            table[n] = value
    else:
        current = np.ones(width + depth)
        reached = depth
        for n in range(1, depth + 1):
            updated = np.asarray(left_inverse(betas[: current.size - 1], current[1:]))
            if updated[:width].min() < UNDERFLOW_FLOOR:
                reached, truncated = n - 1, True
                break
            table[n] = updated[:width]
            current = updated

    if truncated:
        logger.warning("Return structure truncated at depth %d (underflow)", reached)
    return ReturnStructure(
        path=path,
        t_min=t_min,
        t_max=t_max,
        x=table[: reached + 1].copy(),
        depth=reached,
        truncated=truncated,
    )


def tail_u(structure: ReturnStructure, t: int, n: int) -> float:
    """u_{σ^t ω}(n) = m̃(τ >= n) = x_{n-1}(σ^{t+1} ω).

    Raises:
        RangeError: n < 1 or n beyond the tabulated depth
    """
    if not 1 <= n <= structure.depth:
        raise RangeError(f"tail_u needs 1 <= n <= {structure.depth}, got {n}")
    return structure.x_at(n - 1, t + 1)
