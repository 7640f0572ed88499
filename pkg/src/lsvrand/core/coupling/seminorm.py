"""
Log-Lipschitz seminorm

|ψ|_LL = sup |log ψ(y) − log ψ(y')| / |y − y'| over pairs of sample points,
with log 0 − log 0 = 0. Pairs are restricted to neighbours within a fixed
window plus every pair involving an endpoint.
"""

from typing import Optional

import numpy as np

from ...errors import DomainError, ShapeError

WINDOW = 8
Y_LEFT = 0.5
Y_RIGHT = 1.0


def _pair_ratio(log_a: np.ndarray, log_b: np.ndarray, distance: np.ndarray) -> np.ndarray:
    zero_a = np.isneginf(log_a)
    zero_b = np.isneginf(log_b)
    both = zero_a & zero_b
    one = zero_a ^ zero_b
    with np.errstate(invalid="ignore"):
        diff = np.abs(log_a - log_b)
    diff = np.where(both, 0.0, diff)
    ratio = np.divide(diff, distance, out=np.zeros_like(diff), where=distance > 0.0)
    return np.where(one, np.inf, ratio)


def ll_seminorm(
    values: np.ndarray, points: Optional[np.ndarray] = None, window: int = WINDOW
) -> float:
    """LL seminorm of nonnegative samples ``values`` taken at ``points``.

    Args:
        values: ψ at the sample points, all >= 0
        points: Strictly increasing sample locations, default uniform on [1/2, 1]
        window: Number of following neighbours paired with each point

    Returns:
        The windowed supremum; inf if ψ vanishes at some but not all points
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ShapeError("values must be one-dimensional")
    if np.any(values < 0.0) or not np.all(np.isfinite(values)):
        raise DomainError("values must be finite and nonnegative")
    if points is None:
        points = np.linspace(Y_LEFT, Y_RIGHT, values.size)
    points = np.asarray(points, dtype=float)
    if points.shape != values.shape:
        raise ShapeError("points and values must have the same shape")
    if values.size < 2:
        return 0.0

    with np.errstate(divide="ignore"):
        logs = np.log(values)
    best = 0.0
    for offset in range(1, min(window, values.size - 1) + 1):
        ratio = _pair_ratio(logs[offset:], logs[:-offset], points[offset:] - points[:-offset])
        best = max(best, float(ratio.max()))
    for end in (0, values.size - 1):
        ratio = _pair_ratio(logs, np.full_like(logs, logs[end]), np.abs(points - points[end]))
        best = max(best, float(ratio.max()))
    return best
