"""
Decay curves and exponent fits

Measured (n, value, stderr) sequences and weighted least-squares slopes of
their log-log graphs.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ...errors import ConfigurationError, RangeError

logger = logging.getLogger(__name__)

DEFAULT_FIT_START = 20
MAX_RELATIVE_ERROR = 0.3


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo or operator estimate with its standard error."""

    value: float
    stderr: float = 0.0

    def agrees_with(self, other: "Estimate", n_sigma: float = 4.0, floor: float = 0.0) -> bool:
        """|a - b| within n_sigma combined standard errors (plus an absolute floor)."""
        combined = float(np.hypot(self.stderr, other.stderr))
        return abs(self.value - other.value) <= n_sigma * combined + floor


@dataclass(frozen=True, eq=False)
class DecayCurve:
    """Measured values at strictly increasing n.

    Attributes:
        n: Sample points
        value: Measured values (nonnegative)
        stderr: Standard errors, 0 for operator-exact values
        method: operator or monte-carlo
        norm: L^s exponent the values were measured in, if any
        description: Free-form label
    """

    n: np.ndarray
    value: np.ndarray
    stderr: np.ndarray = field(default_factory=lambda: np.zeros(0))
    method: str = "operator"
    norm: Optional[float] = None
    description: str = ""

    def __post_init__(self) -> None:
        n = np.asarray(self.n, dtype=np.int64)
        value = np.asarray(self.value, dtype=float)
        stderr = np.asarray(self.stderr, dtype=float)
        if stderr.size == 0:
            stderr = np.zeros_like(value)
        if not (n.shape == value.shape == stderr.shape) or n.ndim != 1:
            raise ConfigurationError("n, value and stderr must be 1-D arrays of equal length")
        if np.any(np.diff(n) <= 0):
            raise ConfigurationError("curve points must have strictly increasing n")
        if np.any(value < 0.0):
            raise ConfigurationError("curve values must be nonnegative")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "stderr", stderr)

    def __len__(self) -> int:
        return int(self.n.size)

    def to_frame(self) -> pd.DataFrame:
        """Table with columns n, value, stderr, method."""
        return pd.DataFrame(
            {
                "n": self.n,
                "value": self.value,
                "stderr": self.stderr,
                "method": [self.method] * len(self),
            }
        )

    def fit(self, n_lo: int = DEFAULT_FIT_START, n_hi: Optional[int] = None) -> "ExponentFit":
        return fit_exponent(self.n, self.value, self.stderr, n_lo=n_lo, n_hi=n_hi)


@dataclass(frozen=True)
class ExponentFit:
    """Log-log regression log value = intercept + slope · log n."""

    slope: float
    intercept: float
    r2: float
    window: Tuple[int, int]
    n_points: int

    def __post_init__(self) -> None:
        if self.window[0] > self.window[1]:
            raise ConfigurationError("fit window is empty")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "window": [int(self.window[0]), int(self.window[1])],
            "n_points": self.n_points,
        }


def fit_exponent(
    n: Sequence[float],
    value: Sequence[float],
    stderr: Optional[Sequence[float]] = None,
    n_lo: int = DEFAULT_FIT_START,
    n_hi: Optional[int] = None,
    max_relative_error: float = MAX_RELATIVE_ERROR,
) -> ExponentFit:
    """Weighted least-squares slope of log value against log n.

    Points outside [n_lo, n_hi], with nonpositive values, or with
    stderr/value above ``max_relative_error`` are discarded. Weights are
    value/stderr (the inverse standard error of log value); when no point
    carries an error all weights are equal.

    Raises:
        RangeError: Fewer than two points remain
    """
    n = np.asarray(n, dtype=float)
    value = np.asarray(value, dtype=float)
    stderr = np.zeros_like(value) if stderr is None else np.asarray(stderr, dtype=float)
    n_hi = int(n.max()) if n_hi is None and n.size else n_hi
    keep = (n >= n_lo) & (n <= (n_hi if n_hi is not None else np.inf)) & (value > 0.0)
    relative = np.divide(stderr, value, out=np.zeros_like(value), where=value > 0.0)
    keep &= relative <= max_relative_error
    if keep.sum() < 2:
        raise RangeError(f"fewer than two usable points in window [{n_lo}, {n_hi}]")

    x = np.log(n[keep])
    y = np.log(value[keep])
    rel = relative[keep]
    if np.all(rel == 0.0):
        weights = np.ones_like(x)
    else:
        floor = rel[rel > 0].min()
        weights = 1.0 / np.maximum(rel, floor)
    slope, intercept = np.polyfit(x, y, 1, w=weights)

    residual = y - (intercept + slope * x)
    w2 = weights**2
    mean = np.average(y, weights=w2)
    total = float(np.sum(w2 * (y - mean) ** 2))
    r2 = 1.0 - float(np.sum(w2 * residual**2)) / total if total > 0.0 else 1.0
    r2 = float(np.clip(r2, 0.0, 1.0))
    window = (int(n[keep].min()), int(n[keep].max()))
    logger.debug("Fitted slope %.4f on %s (%d points, r2=%.4f)", slope, window, keep.sum(), r2)
    return ExponentFit(
        slope=float(slope),
        intercept=float(intercept),
        r2=r2,
        window=window,
        n_points=int(keep.sum()),
    )
