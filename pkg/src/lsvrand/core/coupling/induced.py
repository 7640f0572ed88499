"""
Induced map on Y = [1/2, 1]

The return partition of Y at shift t has one element per return time ℓ;
on that element F_ω = T_ω^ℓ maps onto Y through one right-branch step and
ℓ - 1 left-branch steps. Elements are parametrized by their image point
z ∈ Y, so every branch of F_ω^{-1} is an inverse chain of left_inverse
calls. Expansion (Λ) and distortion (K) constants are measured on a common
mesh of z values, and the regularity and contraction checks reuse it.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ...errors import NumericalError, RangeError
from ..env.path import EnvironmentPath
from ..env.seeds import make_rng
from ..lsv.maps import left_inverse, map_deriv
from ..lsv.returns import build_return_structure
from ..transfer.density import DensityVector
from .seminorm import ll_seminorm

logger = logging.getLogger(__name__)

MESH_POINTS = 257
EDGE_OFFSET = 1e-6
DEFAULT_DEPTH = 50
K2_MARGIN = 1.0
CHECK_TOLERANCE = 1e-9

DensityLike = Union[DensityVector, Callable[[np.ndarray], np.ndarray]]


def image_mesh(points: int = MESH_POINTS) -> np.ndarray:
    """z values on Y, offset from the endpoints by width·1e-6."""
    delta = 0.5 * EDGE_OFFSET
    return np.linspace(0.5 + delta, 1.0 - delta, points)


def _left_chain(betas: Sequence[float], z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Preimage v of z under T_{β_{m-1}} ∘ ... ∘ T_{β_0} on left branches, with log derivative."""
    v = np.asarray(z, dtype=float)
    log_deriv = np.zeros_like(v)
    for beta in reversed(list(betas)):
        v = np.asarray(left_inverse(float(beta), v))
        log_deriv += np.log(map_deriv(float(beta), v))
    return v, log_deriv


def y_branch(
    path: EnvironmentPath, t: int, ell: int, z: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Point of the Y-element with return time ℓ mapped to z, and log F' there."""
    inner, log_deriv = _left_chain(path.window(t + 1, t + ell), z)
    return 0.5 * (inner + 1.0), log_deriv + np.log(2.0)


def x_branch(
    path: EnvironmentPath, t: int, ell: int, z: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Point of [0, 1/2) with hitting time ℓ mapped to z, and log (T^ℓ)' there."""
    return _left_chain(path.window(t, t + ell), z)


def _ll_of_log(log_values: np.ndarray, z: np.ndarray) -> float:
    finite = np.isfinite(log_values)
    if not finite.any():
        return 0.0
    shifted = np.where(finite, log_values - log_values[finite].max(), -np.inf)
    return ll_seminorm(np.exp(shifted), z)


@dataclass(frozen=True)
class RegularityConstants:
    """Expansion and distortion of the induced map with the derived thresholds.

    Attributes:
        expansion: Λ, lower bound of F' over all elements
        distortion: K, largest LL seminorm of a pushed-forward element density
        k2: Regularity threshold, must exceed (1 - 1/Λ)K
        k1: K + K2/Λ
        depth: Number of partition elements examined
        t: Shift of the partition
        truncated: True if the return structure ran into underflow
    """

    expansion: float
    distortion: float
    k2: float
    k1: float
    depth: int = DEFAULT_DEPTH
    t: int = 0
    truncated: bool = False

    def __post_init__(self) -> None:
        if not self.expansion > 1.0:
            raise NumericalError(f"induced map is not expanding: Lambda = {self.expansion}")
        if self.distortion < 0.0:
            raise RangeError("distortion constant must be nonnegative")
        if not self.k2 > (1.0 - 1.0 / self.expansion) * self.distortion:
            raise RangeError(
                f"K2 = {self.k2} must exceed (1 - 1/Lambda) K = "
                f"{(1.0 - 1.0 / self.expansion) * self.distortion}"
            )
        if abs(self.k1 - (self.distortion + self.k2 / self.expansion)) > 1e-12:
            raise RangeError("K1 must equal K + K2/Lambda")

    @classmethod
    def derive(
        cls,
        expansion: float,
        distortion: float,
        k2: Optional[float] = None,
        depth: int = DEFAULT_DEPTH,
        t: int = 0,
        truncated: bool = False,
    ) -> "RegularityConstants":
        """Fill in K2 (default 2(1 - 1/Λ)K + 1) and K1 = K + K2/Λ."""
        if k2 is None:
            k2 = 2.0 * (1.0 - 1.0 / expansion) * distortion + K2_MARGIN
        return cls(
            expansion=expansion,
            distortion=distortion,
            k2=k2,
            k1=distortion + k2 / expansion,
            depth=depth,
            t=t,
            truncated=truncated,
        )

    @property
    def c_u(self) -> float:
        """Windowing constant 2·exp(K2)."""
        return 2.0 * float(np.exp(self.k2))

    def to_dict(self) -> Dict[str, float]:
        return {
            "Lambda": self.expansion,
            "K": self.distortion,
            "K2": self.k2,
            "K1": self.k1,
            "C_u": self.c_u,
            "depth": self.depth,
            "truncated": self.truncated,
        }


def _element_depth(path: EnvironmentPath, t: int, depth: int) -> Tuple[int, bool]:
    structure = build_return_structure(path, depth=depth, t_min=t, t_max=t)
    return structure.depth, structure.truncated


def induced_constants(
    path: EnvironmentPath,
    depth: int = DEFAULT_DEPTH,
    t: int = 0,
    k2: Optional[float] = None,
    points: int = MESH_POINTS,
) -> RegularityConstants:
    """Measure Λ and K over the first ``depth`` elements of the return partition at t."""
    depth, truncated = _element_depth(path, t, depth)
    if truncated:
        logger.warning("Induced constants limited to depth %d by underflow", depth)
    z = image_mesh(points)
    expansion = np.inf
    distortion = 0.0
    for ell in range(1, depth + 1):
        _, log_deriv = y_branch(path, t, ell, z)
        expansion = min(expansion, float(np.exp(log_deriv.min())))
        distortion = max(distortion, _ll_of_log(-log_deriv, z))
    logger.debug("Induced constants at t=%d: Lambda=%.6g K=%.6g", t, expansion, distortion)
    return RegularityConstants.derive(
        expansion, distortion, k2=k2, depth=depth, t=t, truncated=truncated
    )


def _density_function(density: DensityLike) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(density, DensityVector):
        midpoints = density.grid.midpoints
        values = density.values
        return lambda x: np.interp(x, midpoints, values)
    return density


@dataclass
class RegularityReport:
    """LL seminorms of the pushed restrictions, one per return time."""

    passed: bool
    worst: Tuple[int, float]
    threshold: float
    values: Dict[int, float] = field(default_factory=dict)


def regularity_check(
    density: DensityLike,
    path: EnvironmentPath,
    t: int,
    ell_max: int,
    k1: float,
    points: int = MESH_POINTS,
) -> RegularityReport:
    """Push ν restricted to {τ = ℓ} through T^ℓ and compare its LL seminorm with K1.

    The set {τ = ℓ} is an interval of [0, 1/2) together with an element of Y;
    both are mapped onto Y and their pushed densities add.
    """
    if ell_max < 1:
        raise RangeError("ell_max must be at least 1")
    nu = _density_function(density)
    z = image_mesh(points)
    values: Dict[int, float] = {}
    for ell in range(1, ell_max + 1):
        wx, log_dx = x_branch(path, t, ell, z)
        wy, log_dy = y_branch(path, t, ell, z)
        floor = min(log_dx.min(), log_dy.min())
        pushed = np.maximum(nu(wx), 0.0) * np.exp(floor - log_dx)
        pushed += np.maximum(nu(wy), 0.0) * np.exp(floor - log_dy)
        values[ell] = ll_seminorm(pushed / max(pushed.max(), np.finfo(float).tiny), z)
    worst_ell = max(values, key=values.get)
    worst = (worst_ell, values[worst_ell])
    passed = worst[1] <= k1 * (1.0 + CHECK_TOLERANCE)
    if not passed:
        logger.warning("Regularity bound %.6g exceeded at l=%d (%.6g)", k1, worst[0], worst[1])
    return RegularityReport(passed=passed, worst=worst, threshold=k1, values=values)


@dataclass
class ContractionReport:
    """Outcome of the tilt-density sweep."""

    n_densities: int
    n_checks: int
    violations: List[Dict[str, float]]
    worst_margin: float

    @property
    def passed(self) -> bool:
        return not self.violations


def contraction_check(
    path: EnvironmentPath,
    constants: RegularityConstants,
    n_densities: int = 100,
    seed: int = 0,
    points: int = MESH_POINTS,
) -> ContractionReport:
    """Check |F_*(ν|_a)|_LL <= K + |ν|_LL/Λ for tilts ν(y) = e^{cy}, |c| <= K2.

    Every element up to ``constants.depth`` is tested against every tilt on
    the mesh the constants were measured on.
    """
    if n_densities < 1:
        raise RangeError("n_densities must be at least 1")
    rng = make_rng(seed, 0)
    tilts = rng.uniform(-constants.k2, constants.k2, n_densities)
    z = image_mesh(points)
    branches = [y_branch(path, constants.t, ell, z) for ell in range(1, constants.depth + 1)]

    violations: List[Dict[str, float]] = []
    worst_margin = -np.inf
    for c in tilts:
        bound = constants.distortion + abs(c) / constants.expansion
        for ell, (w, log_deriv) in enumerate(branches, start=1):
            value = _ll_of_log(c * w - log_deriv, z)
            margin = value - bound
            worst_margin = max(worst_margin, margin)
            if margin > CHECK_TOLERANCE * max(1.0, bound):
                violations.append({"c": float(c), "ell": ell, "value": value, "bound": bound})
    if violations:
        logger.warning("Contraction violated in %d of %d checks", len(violations), tilts.size)
    return ContractionReport(
        n_densities=n_densities,
        n_checks=n_densities * len(branches),
        violations=violations,
        worst_margin=float(worst_margin),
    )
