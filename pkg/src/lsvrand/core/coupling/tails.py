"""
Coupling-time tails

The coupling time S = X_1 + ... + X_ξ has ξ geometric on {1, 2, ...} with
parameter θ, P(X_1 >= ℓ) = r(ℓ), and conditional tails
P(X_{j+1} >= ℓ | X_1..X_j) = min(1, u_{σ^p ω, X_j}(ℓ)) with p = X_1 + ... +
X_{j-1}, where u_{ω,n}(ℓ) = C_u ∑_{m=0}^{n} u_{σ^m ω}(ℓ + n - m) are windowed
return tails. Samples run in lockstep over fixed-size blocks; draws that
would carry S past the horizon are censored.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from ...errors import CapabilityError, RangeError
from ..env.path import EnvironmentPath
from ..env.seeds import make_rng, sample_blocks
from ..lsv.returns import ReturnStructure, build_return_structure
from ..stats.curves import DecayCurve, ExponentFit, fit_exponent
from ..transfer.density import DensityVector

logger = logging.getLogger(__name__)

DEFAULT_THETA = 0.25
DEFAULT_HORIZON = 200
DEFAULT_BLOCK_SIZE = 1 << 16
DEFAULT_FIT_START = 5


def _as_tail(values: np.ndarray) -> np.ndarray:
    """Clamp to [0, 1], force value 1 at ℓ = 0 and make nonincreasing."""
    table = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
    table[0] = 1.0
    return np.minimum.accumulate(table)


def _invert(table: np.ndarray, u: np.ndarray, cap: np.ndarray) -> np.ndarray:
    """Largest ℓ <= cap with table[ℓ] >= u, for u in (0, 1]."""
    count = np.searchsorted(-table, -u, side="right")
    return np.minimum(count - 1, cap).astype(np.int64)


class TailFunction(ABC):
    """Tail ℓ ↦ P(X_1 >= ℓ) of the first summand."""

    kind: str = ""

    @abstractmethod
    def values(self, ell: np.ndarray) -> np.ndarray:
        """Raw tail values at integer ℓ >= 0."""

    def table(self, horizon: int) -> np.ndarray:
        return _as_tail(self.values(np.arange(horizon + 1)))

    def sample(self, u: np.ndarray, cap: np.ndarray, horizon: int) -> np.ndarray:
        return _invert(self.table(horizon), u, cap)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}()"


class ReturnTail(TailFunction):
    """u_{σ^t ω}(ℓ), the return-time tail of normalized Lebesgue measure on Y."""

    kind = "return"

    def __init__(self, structure: ReturnStructure, t: int = 0):
        self.structure = structure
        self.t = t
        self._tails = structure.tails(t)

    def values(self, ell: np.ndarray) -> np.ndarray:
        ell = np.asarray(ell, dtype=np.int64)
        inside = ell <= self.structure.depth
        out = np.zeros(ell.shape)
        out[inside] = self._tails[ell[inside]]
        return out


class DoublingTail(TailFunction):
    """Return tail of the doubling map, 2^{1-ℓ} for ℓ >= 1."""

    kind = "doubling"

    def values(self, ell: np.ndarray) -> np.ndarray:
        ell = np.asarray(ell, dtype=float)
        return np.where(ell <= 0, 1.0, np.exp2(1.0 - ell))


class GeometricTail(TailFunction):
    """ρ^ℓ."""

    kind = "geometric"

    def __init__(self, rho: float):
        if not 0.0 < rho < 1.0:
            raise RangeError(f"rho must lie in (0, 1), got {rho}")
        self.rho = rho

    def values(self, ell: np.ndarray) -> np.ndarray:
        return np.power(self.rho, np.asarray(ell, dtype=float))

    def __repr__(self) -> str:
        return f"GeometricTail(rho={self.rho})"


class ZeroTail(TailFunction):
    """X = 0 almost surely."""

    kind = "zero"

    def values(self, ell: np.ndarray) -> np.ndarray:
        return np.where(np.asarray(ell) <= 0, 1.0, 0.0)


class ConditionalTail(ABC):
    """Tail of X_{j+1} given the shift p and the previous summand n."""

    kind: str = ""

    @abstractmethod
    def values(self, shift: np.ndarray, n: np.ndarray, ell: np.ndarray) -> np.ndarray:
        """Clamped tail at broadcastable (shift, n, ℓ)."""

    def sample(
        self, shift: np.ndarray, n: np.ndarray, u: np.ndarray, cap: np.ndarray
    ) -> np.ndarray:
        """Largest ℓ <= cap with tail(ℓ) >= u, by vectorized bisection."""
        lo = np.zeros(u.size, dtype=np.int64)
        hi = cap.astype(np.int64) + 1
        while True:
            open_ = hi - lo > 1
            if not open_.any():
                return lo
            mid = (lo + hi) // 2
            ok = self.values(shift, n, mid) >= u
            lo = np.where(open_ & ok, mid, lo)
            hi = np.where(open_ & ~ok, mid, hi)


class WindowedTail(ConditionalTail):
    """min(1, u_{σ^{t+p} ω, n}(ℓ)) from anti-diagonal prefix sums of the tail table.

    Row r of the table holds u_{σ^{t+r} ω}(q) for q = 0..horizon+1; a windowed
    sum is a difference of two prefix sums along the anti-diagonal r + q.
    """

    kind = "window"

    def __init__(self, structure: ReturnStructure, t: int, horizon: int, c_u: float):
        if structure.t_min > t or structure.t_max < t + horizon:
            raise RangeError(f"return structure must cover shifts [{t}, {t + horizon}]")
        self.c_u = c_u
        self.horizon = horizon
        columns = horizon + 2
        table = np.zeros((horizon + 1, columns))
        for r in range(horizon + 1):
            tails = structure.tails(t + r)[:columns]
            table[r, : tails.size] = tails
        prefix = table.copy()
        for r in range(1, horizon + 1):
            prefix[r, :-1] += prefix[r - 1, 1:]
        self._prefix = prefix

    def values(self, shift: np.ndarray, n: np.ndarray, ell: np.ndarray) -> np.ndarray:
        shift, n, ell = np.broadcast_arrays(
            np.asarray(shift, dtype=np.int64),
            np.asarray(n, dtype=np.int64),
            np.asarray(ell, dtype=np.int64),
        )
        end = shift + n
        total = self._prefix[end, ell].copy()
        earlier = shift > 0
        total[earlier] -= self._prefix[shift[earlier] - 1, ell[earlier] + n[earlier] + 1]
        return np.minimum(1.0, self.c_u * np.maximum(total, 0.0))


class GeometricConditional(ConditionalTail):
    """Every conditional tail replaced by ρ^ℓ."""

    kind = "geometric"

    def __init__(self, rho: float):
        if not 0.0 < rho < 1.0:
            raise RangeError(f"rho must lie in (0, 1), got {rho}")
        self.rho = rho

    def values(self, shift: np.ndarray, n: np.ndarray, ell: np.ndarray) -> np.ndarray:
        ell = np.broadcast_arrays(shift, n, np.asarray(ell, dtype=float))[2]
        return np.power(self.rho, ell)

    def sample(
        self, shift: np.ndarray, n: np.ndarray, u: np.ndarray, cap: np.ndarray
    ) -> np.ndarray:
        draw = np.floor(np.log(u) / np.log(self.rho))
        return np.minimum(draw, cap).astype(np.int64)


class ZeroConditional(ConditionalTail):
    """Every later summand is 0."""

    kind = "zero"

    def values(self, shift: np.ndarray, n: np.ndarray, ell: np.ndarray) -> np.ndarray:
        ell = np.broadcast_arrays(shift, n, np.asarray(ell))[2]
        return np.where(ell <= 0, 1.0, 0.0)

    def sample(
        self, shift: np.ndarray, n: np.ndarray, u: np.ndarray, cap: np.ndarray
    ) -> np.ndarray:
        return np.zeros(u.size, dtype=np.int64)


FIRST_TAILS = ("return", "doubling", "geometric", "zero")
CONDITIONAL_TAILS = ("window", "geometric", "zero")


def u_window(structure: ReturnStructure, t: int, n: int, ell: int, c_u: float) -> float:
    """C_u (u_{σ^t ω}(ℓ+n) + u_{σ^{t+1} ω}(ℓ+n-1) + ... + u_{σ^{t+n} ω}(ℓ)), unclamped."""
    if n < 0 or ell < 0:
        raise RangeError("n and ell must be nonnegative")
    if ell + n > structure.depth:
        raise RangeError(f"depth {structure.depth} does not cover l+n = {ell + n}")
    if t < structure.t_min or t + n > structure.t_max:
        raise RangeError(
            f"shifts [{t}, {t + n}] outside [{structure.t_min}, {structure.t_max}]"
        )
    return c_u * float(sum(structure.tails(t + m)[ell + n - m] for m in range(n + 1)))


@dataclass(frozen=True)
class CouplingConfig:
    """Parameters of the coupling-time simulation.

    Attributes:
        theta: Parameter of the geometric number of summands
        c_u: Windowing constant, 2·exp(K2) for regularity threshold K2
        first_tail: Tail r of X_1, either a TailFunction or one of FIRST_TAILS
        conditional: One of CONDITIONAL_TAILS
        rho: Ratio of the geometric tails
        horizon: Largest value of S resolved; larger draws are censored
        n_samples: Number of draws of S
        seed: Base seed, block b uses the generator derived from (seed, b)
        block_size: Samples per block
    """

    theta: float = DEFAULT_THETA
    c_u: float = 2.0 * float(np.e)
    first_tail: Union[str, TailFunction] = "return"
    conditional: str = "window"
    rho: float = 0.5
    horizon: int = DEFAULT_HORIZON
    n_samples: int = 100_000
    seed: int = 0
    block_size: int = DEFAULT_BLOCK_SIZE

    def __post_init__(self) -> None:
        if not 0.0 < self.theta < 1.0:
            raise RangeError(f"theta must lie in (0, 1), got {self.theta}")
        if self.c_u <= 0.0:
            raise RangeError("C_u must be positive")
        if isinstance(self.first_tail, str) and self.first_tail not in FIRST_TAILS:
            raise RangeError(f"first_tail must be one of {FIRST_TAILS}")
        if self.conditional not in CONDITIONAL_TAILS:
            raise RangeError(f"conditional must be one of {CONDITIONAL_TAILS}")
        if self.horizon < 1 or self.n_samples < 1 or self.block_size < 1:
            raise RangeError("horizon, n_samples and block_size must be positive")

    @classmethod
    def from_k2(cls, k2: float, **kwargs) -> "CouplingConfig":
        return cls(c_u=2.0 * float(np.exp(k2)), **kwargs)

    @property
    def needs_structure(self) -> bool:
        return self.first_tail == "return" or self.conditional == "window"


def coupling_structure(path: EnvironmentPath, horizon: int, t: int = 0) -> ReturnStructure:
    """Return structure covering every tail the simulation can query."""
    return build_return_structure(path, depth=horizon + 1, t_min=t, t_max=t + horizon)


def build_tails(
    config: CouplingConfig, structure: Optional[ReturnStructure] = None, t: int = 0
) -> Tuple[TailFunction, ConditionalTail]:
    """Instantiate the first and conditional tails named by the config."""
    if structure is None and config.needs_structure:
        raise CapabilityError("a return structure is needed for return or windowed tails")
    first = config.first_tail
    if isinstance(first, str):
        if first == "return":
            first = ReturnTail(structure, t)
        elif first == "doubling":
            first = DoublingTail()
        elif first == "geometric":
            first = GeometricTail(config.rho)
        else:
            first = ZeroTail()
    if config.conditional == "window":
        conditional: ConditionalTail = WindowedTail(structure, t, config.horizon, config.c_u)
    elif config.conditional == "geometric":
        conditional = GeometricConditional(config.rho)
    else:
        conditional = ZeroConditional()
    return first, conditional


def _simulate_block(
    first: TailFunction,
    conditional: ConditionalTail,
    theta: float,
    horizon: int,
    size: int,
    seed: int,
    block: int,
) -> Tuple[np.ndarray, np.ndarray]:
    rng = make_rng(seed, block)
    count = rng.geometric(theta, size)
    # draws may reach horizon + 1 so that S == horizon stays resolved
    cap = np.full(size, horizon + 1, dtype=np.int64)
    previous = first.sample(1.0 - rng.random(size), cap, horizon + 1)
    total = previous.copy()
    censored = total > horizon
    j = 1
    while True:
        u = 1.0 - rng.random(size)
        active = np.flatnonzero((j < count) & ~censored)
        if active.size == 0:
            return total, censored
        n = previous[active]
        shift = total[active] - n
        room = horizon + 1 - total[active]
        draw = conditional.sample(shift, n, u[active], room)
        total[active] += draw
        previous[active] = draw
        censored[active] = total[active] > horizon
        j += 1


@dataclass(frozen=True, eq=False)
class CouplingTailSample:
    """Empirical tail P̂(S >= n) for n = 0..horizon.

    Censored draws count as S >= n for every n up to the horizon.
    """

    n: np.ndarray
    p_hat: np.ndarray
    stderr: np.ndarray
    censored_frac: float
    samples: np.ndarray
    censored: np.ndarray
    fit: Optional[ExponentFit] = None

    def to_frame(self) -> pd.DataFrame:
        """Table with columns n, p_hat, stderr, censored_frac."""
        return pd.DataFrame(
            {
                "n": self.n.astype(np.int64),
                "p_hat": self.p_hat,
                "stderr": self.stderr,
                "censored_frac": np.full(self.n.size, self.censored_frac),
            }
        )

    def curve(self) -> DecayCurve:
        return DecayCurve(
            n=self.n[1:],
            value=self.p_hat[1:],
            stderr=self.stderr[1:],
            method="monte-carlo",
            description="P(S >= n)",
        )


def empirical_tail(samples: np.ndarray, censored: np.ndarray, horizon: int) -> np.ndarray:
    """P̂(S >= n) for n = 0..horizon."""
    resolved = np.where(censored, horizon, np.minimum(samples, horizon))
    counts = np.bincount(resolved, minlength=horizon + 1)
    at_least = np.cumsum(counts[::-1])[::-1]
    return at_least / float(samples.size)


def simulate_coupling_time(
    config: CouplingConfig,
    path: Optional[EnvironmentPath] = None,
    t: int = 0,
    threads: int = 1,
    structure: Optional[ReturnStructure] = None,
    fit_lo: int = DEFAULT_FIT_START,
) -> CouplingTailSample:
    """Draw config.n_samples values of S and tabulate their empirical tail.

    Output does not depend on ``threads``: block b always uses the generator
    derived from (seed, b).
    """
    if config.needs_structure and structure is None:
        if path is None:
            raise CapabilityError("a path is needed for return or windowed tails")
        structure = coupling_structure(path, config.horizon, t)
    first, conditional = build_tails(config, structure, t)
    blocks = list(sample_blocks(config.n_samples, config.block_size))
    logger.debug("Simulating %d coupling times in %d blocks", config.n_samples, len(blocks))
    results: List[Tuple[np.ndarray, np.ndarray]] = Parallel(n_jobs=threads, prefer="threads")(
        delayed(_simulate_block)(
            first, conditional, config.theta, config.horizon, stop - start, config.seed, block
        )
        for block, start, stop in blocks
    )
    samples = np.concatenate([r[0] for r in results])
    censored = np.concatenate([r[1] for r in results])
    p_hat = empirical_tail(samples, censored, config.horizon)
    stderr = np.sqrt(p_hat * (1.0 - p_hat) / samples.size)
    censored_frac = float(censored.mean())
    if censored_frac > 0.0:
        logger.warning("%.3g%% of coupling-time draws censored", 100.0 * censored_frac)

    n = np.arange(config.horizon + 1)
    fit = None
    try:
        fit = fit_exponent(n[1:], p_hat[1:], stderr[1:], n_lo=fit_lo)
    except RangeError:
        logger.warning("Too few resolved tail points to fit the coupling-time decay")
    return CouplingTailSample(
        n=n,
        p_hat=p_hat,
        stderr=stderr,
        censored_frac=censored_frac,
        samples=samples,
        censored=censored,
        fit=fit,
    )


def exact_coupling_tail(
    first: TailFunction,
    conditional: ConditionalTail,
    theta: float,
    horizon: int,
    tolerance: float = 1e-15,
) -> np.ndarray:
    """P(S >= n), n = 0..horizon, by propagating the law of (partial sum, last summand).

    Mass that reaches the horizon is absorbed there. Iteration stops once the
    mass still in play falls below ``tolerance``.
    """
    h = horizon
    r = first.table(h)
    state = np.zeros((h, h + 1))
    for x in range(h):
        state[x, x] = r[x] - r[x + 1]

    kernel = np.zeros((h, h + 1, h + 1))
    for s in range(h):
        n = np.arange(s + 1)[:, None]
        ell = np.arange(h - s + 1)[None, :]
        tail = conditional.values(s - n, n, ell)
        tail = np.minimum.accumulate(np.clip(tail, 0.0, 1.0), axis=1)
        kernel[s, : s + 1, : h - s] = tail[:, :-1] - tail[:, 1:]

    stopped = np.zeros(h)
    while state.sum() > tolerance:
        stopped += theta * state.sum(axis=1)
        moved = np.einsum("sn,snm->sm", state, kernel) * (1.0 - theta)
        state = np.zeros_like(state)
        for m in range(h):
            state[m:, m] = moved[: h - m, m]
    return 1.0 - np.concatenate([[0.0], np.cumsum(stopped)])


def compound_geometric_tail(theta: float, rho: float, n: np.ndarray) -> np.ndarray:
    """P(S >= n) = (ρ/c)^n, c = θ + ρ - θρ, when every summand has tail ρ^ℓ."""
    c = theta + rho - theta * rho
    return np.power(rho / c, np.asarray(n, dtype=float))


def dkw_epsilon(n_samples: int, alpha: float = 1e-3) -> float:
    """Half-width of the Dvoretzky-Kiefer-Wolfowitz band at level alpha."""
    return float(np.sqrt(np.log(2.0 / alpha) / (2.0 * n_samples)))


def _cdf(density: DensityVector, points: np.ndarray) -> np.ndarray:
    cumulative = np.concatenate([[0.0], np.cumsum(density.masses)])
    return np.interp(points, density.grid.boundaries, cumulative)


def measure_tail(
    density: DensityVector, structure: ReturnStructure, t: int, n_max: int
) -> DecayCurve:
    """μ(τ >= n) = μ([0, x_n)) + μ([1/2, y_n)) for n = 1..n_max."""
    if not 1 <= n_max <= structure.depth:
        raise RangeError(f"n_max must lie in [1, {structure.depth}]")
    xs = structure.xs(t)[1 : n_max + 1]
    ys = structure.ys(t)[1 : n_max + 1]
    half = _cdf(density, np.array([0.5]))[0]
    value = _cdf(density, xs) + (_cdf(density, ys) - half)
    total = density.mass()
    return DecayCurve(
        n=np.arange(1, n_max + 1),
        value=np.maximum(value / total, 0.0),
        method="operator",
        description="mu(tau >= n)",
    )
