"""
LSV map family

T_β(x) = x(1 + 2^β x^β) on [0, 1/2) and 2x - 1 on [1/2, 1], with the point
1/2 assigned to the right branch. All functions accept scalars or arrays.
"""

from typing import Optional, Union

import numpy as np

from ...errors import DomainError, RootFindingError
from ..env.path import EnvironmentPath

ArrayLike = Union[float, np.ndarray]

BISECTION_WIDTH = 1e-10
NEWTON_MAX_STEPS = 60
FINAL_BISECTION_STEPS = 60
REFRESH_SCALE = 2.0**-52
BELOW_ONE = 1.0 - 2.0**-53


def _as_unit_array(x: ArrayLike, name: str = "x") -> np.ndarray:
    values = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values < 0.0) or np.any(values > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")
    return values


def _left_branch(beta: float, x: np.ndarray) -> np.ndarray:
    return x * (1.0 + 2.0**beta * np.power(x, beta))


def _left_deriv(beta: float, x: np.ndarray) -> np.ndarray:
    return 1.0 + (1.0 + beta) * 2.0**beta * np.power(x, beta)


def _unwrap(values: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(values) if np.ndim(like) == 0 else values


def map_eval(beta: float, x: ArrayLike) -> ArrayLike:
    """T_β(x).

    Raises:
        DomainError: Some x outside [0, 1]
    """
    values = _as_unit_array(x)
    out = np.where(values < 0.5, _left_branch(beta, np.minimum(values, 0.5)), 2.0 * values - 1.0)
    return _unwrap(out, x)


def map_deriv(beta: float, x: ArrayLike) -> ArrayLike:
    """T_β'(x): 1 + (1+β)2^β x^β on [0, 1/2), 2 on [1/2, 1].

    For β = 0 the left branch is 2x and the derivative is 2 everywhere.
    """
    values = _as_unit_array(x)
    out = np.where(values < 0.5, _left_deriv(beta, np.minimum(values, 0.5)), 2.0)
    return _unwrap(out, x)


def left_inverse(beta: ArrayLike, y: ArrayLike) -> ArrayLike:
    """Unique v in [0, 1/2] with v(1 + 2^β v^β) = y.

    ``beta`` may be a scalar or an array broadcasting against ``y``. The root
    is bracketed in [y / (1 + 2^β y^β), min(y, 1/2)], bisected to width 1e-10
    and polished with Newton steps. Entries whose Newton iterate leaves the
    bracket fall back to bisection. β = 0 entries are exactly y/2.

    Raises:
        RootFindingError: The iteration produced a non-finite value
    """
    targets = np.clip(_as_unit_array(y, "y"), 0.0, 1.0)
    if np.ndim(beta) == 0 and float(beta) == 0.0:
        return _unwrap(targets / 2.0, y)

    shape = np.broadcast(np.asarray(beta), targets).shape
    flat = np.broadcast_to(targets, shape).astype(float).ravel()
    b = np.broadcast_to(np.asarray(beta, dtype=float), shape).ravel()
    scale = 2.0**b

    def branch(v: np.ndarray, sel=slice(None)) -> np.ndarray:
        return v * (1.0 + scale[sel] * np.power(v, b[sel]))

    lo = flat / (1.0 + scale * np.power(flat, b))
    hi = np.minimum(flat, 0.5)
    while np.any(hi - lo > BISECTION_WIDTH):
        mid = 0.5 * (lo + hi)
        below = branch(mid) < flat
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)

    v = 0.5 * (lo + hi)
    active = (flat > 0.0) & (flat < 1.0)
    fallback = np.zeros_like(active)
    for _ in range(NEWTON_MAX_STEPS):
        if not active.any():
            break
        step = (branch(v) - flat) / (1.0 + (1.0 + b) * scale * np.power(v, b))
        candidate = v - step
        left = (candidate < lo) | (candidate > hi)
        fallback |= active & left
        v = np.where(active & ~left, candidate, v)
        converged = np.abs(step) <= 1e-300 + 1e-15 * np.abs(v)
        active &= ~converged & ~left

    if fallback.any():
        idx = np.flatnonzero(fallback)
        lo_f, hi_f = lo[idx], hi[idx]
        for _ in range(FINAL_BISECTION_STEPS):
            mid = 0.5 * (lo_f + hi_f)
            below = branch(mid, idx) < flat[idx]
            lo_f = np.where(below, mid, lo_f)
            hi_f = np.where(below, hi_f, mid)
        v[idx] = 0.5 * (lo_f + hi_f)

    v = np.where(b == 0.0, flat / 2.0, v)
    v = np.where(flat <= 0.0, 0.0, np.where(flat >= 1.0, 0.5, v))
    if not np.all(np.isfinite(v)):
        raise RootFindingError(f"left_inverse did not converge for beta={beta}")
    return _unwrap(v.reshape(shape), y if np.ndim(beta) == 0 else beta)


def advance(
    beta: float, x: np.ndarray, rng: Optional[np.random.Generator] = None
) -> np.ndarray:
    """One step of T_β on an array, without domain checks.

    With ``rng`` given, points that went through a branch that shifts bits
    out (the right branch, or every branch when β = 0) receive a uniform
    perturbation below 2^-52, so that floating-point orbits do not collapse
    onto dyadic rationals. The perturbed value stays below 1.
    """
    right = x >= 0.5
    out = np.where(right, 2.0 * x - 1.0, _left_branch(beta, np.minimum(x, 0.5)))
    if rng is not None:
        refresh = np.ones_like(right) if beta == 0.0 else right
        count = int(refresh.sum())
        if count:
            out[refresh] = np.minimum(out[refresh] + REFRESH_SCALE * rng.random(count), BELOW_ONE)
    return out


def orbit(path: EnvironmentPath, x0: float, n: int, t: int = 0) -> np.ndarray:
    """x0, T_ω x0, ..., T_ω^n x0 along the path starting at shift t.

    Raises:
        RangeError: The path does not cover shifts t..t+n-1
    """
    betas = path.window(t, t + n)
    x = float(_as_unit_array(x0))
    points = np.empty(n + 1)
    points[0] = x
    for k, beta in enumerate(betas):
        x = 2.0 * x - 1.0 if x >= 0.5 else x * (1.0 + 2.0**beta * x**beta)
        points[k + 1] = x
    return points
