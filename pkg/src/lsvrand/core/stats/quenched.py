"""
Quenched statistics along a fixed path

Memory-loss curves, correlations (operator and Monte Carlo) and the growth
of Σ²_{ω,n} = ∫ (S_n^ω φ)² dμ_ω, all for one environment path.
"""

import logging
from typing import Dict, Sequence

import numpy as np

from ...errors import ConfigurationError, RangeError
from ..transfer.density import DensityCocycle, integrate, lp_norm
from ..transfer.normalized import normalized_push, normalized_step
from .curves import DecayCurve, Estimate
from .observables import Observable
from .sampling import birkhoff_samples, correlation_samples

logger = logging.getLogger(__name__)

METHODS = ("operator", "monte-carlo")


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise ConfigurationError(f"method must be one of {METHODS}, got {method!r}")


def memory_loss_curves(
    cocycle: DensityCocycle,
    s: int,
    i: int,
    j_max: int,
    g1: Observable,
    g2: Observable,
    s_norms: Sequence[float] = (1.0,),
) -> Dict[float, DecayCurve]:
    """‖[L^{j-i}_{σ^i ω}(g2 · L^{i-s}_{σ^s ω} g1)]_{σ^j ω}‖_{L^s(μ_{σ^j ω})} for j = i+1..j_max.

    One pass along the path serves every requested norm.

    Returns:
        Mapping s_norm -> DecayCurve indexed by n = j - i
    """
    if not s <= i < j_max:
        raise RangeError(f"need s <= i < j_max, got s={s}, i={i}, j_max={j_max}")
    path = cocycle.path
    f = g1.fiber_values(cocycle.density(s), path.beta(s))
    f = normalized_push(cocycle, s, i - s, f)
    f = f * g2.fiber_values(cocycle.density(i), path.beta(i))

    n_points = j_max - i
    values = {norm: np.empty(n_points) for norm in s_norms}
    h_from = cocycle.density(i)
    for k in range(n_points):
        j = i + k + 1
        h_to = cocycle.density(j)
        f = normalized_step(cocycle.matrix(j - 1), h_from, h_to, f)
        centered = f - integrate(h_to, f)
        for norm in s_norms:
            values[norm][k] = lp_norm(h_to, centered, norm)
        h_from = h_to

    n = np.arange(1, n_points + 1)
    return {
        norm: DecayCurve(
            n=n,
            value=values[norm],
            method="operator",
            norm=norm,
            description=f"memory loss {g1.name}/{g2.name} L^{norm:g}",
        )
        for norm in s_norms
    }


def memory_loss_curve(
    cocycle: DensityCocycle,
    s: int,
    i: int,
    j_max: int,
    g1: Observable,
    g2: Observable,
    s_norm: float = 1.0,
) -> DecayCurve:
    """Single-norm version of memory_loss_curves."""
    return memory_loss_curves(cocycle, s, i, j_max, g1, g2, (s_norm,))[s_norm]


def dominance_margin(curve: DecayCurve, reference: DecayCurve, n_from: int) -> float:
    """Largest excess of ``curve`` over ``reference`` at shared n >= n_from.

    A margin <= 0 means the curve lies below the reference pointwise there.

    Raises:
        RangeError: The curves share no n >= n_from
    """
    n, ia, ib = np.intersect1d(curve.n, reference.n, return_indices=True)
    keep = n >= n_from
    if not keep.any():
        raise RangeError(f"curves share no points at n >= {n_from}")
    return float(np.max(curve.value[ia[keep]] - reference.value[ib[keep]]))


def correlation(
    cocycle: DensityCocycle,
    t: int,
    phi: Observable,
    psi: Observable,
    n: int,
    method: str = "operator",
    n_samples: int = 100_000,
    seed: int = 0,
    threads: int = 1,
) -> Estimate:
    """∫ φ_{σ^t ω} · (ψ_{σ^{t+n} ω} ∘ T^n) dμ_{σ^t ω}.

    The operator method evaluates ∫ (L^n φ) ψ dμ_{σ^{t+n} ω} on the grid; the
    Monte Carlo method averages the product along exact orbits.
    """
    _check_method(method)
    path = cocycle.path
    if method == "operator":
        f = phi.fiber_values(cocycle.density(t), path.beta(t))
        f = normalized_push(cocycle, t, n, f)
        h_end = cocycle.density(t + n)
        g = psi.fiber_values(h_end, path.beta(t + n))
        return Estimate(value=integrate(h_end, f * g), stderr=0.0)

    products = correlation_samples(cocycle, phi, psi, t, n, n_samples, seed, threads=threads)
    stderr = float(products.std(ddof=1) / np.sqrt(products.size)) if products.size > 1 else 0.0
    return Estimate(value=float(products.mean()), stderr=stderr)


def variance_curve(
    cocycle: DensityCocycle,
    phi: Observable,
    ns: Sequence[int],
    method: str = "operator",
    t: int = 0,
    n_samples: int = 100_000,
    seed: int = 0,
    threads: int = 1,
) -> DecayCurve:
    """Σ²_{ω,n} / n at the requested n.

    The operator method uses the recursion G_0 = 0, G_{l+1} = L_l(G_l + φ_l)
    and Σ²_{ω,n} = ∑_{l<n} (∫ φ_l² dμ_l + 2 ∫ G_l φ_l dμ_l). The Monte Carlo
    method uses the sample second moment of S_n.
    """
    _check_method(method)
    ns = np.array(sorted(set(int(n) for n in ns)), dtype=np.int64)
    if ns.size == 0 or ns[0] < 1:
        raise RangeError("variance_curve needs n >= 1")

    if method == "monte-carlo":
        samples = birkhoff_samples(
            cocycle,
            phi,
            int(ns[-1]),
            n_samples,
            seed,
            t=t,
            checkpoints=ns.tolist(),
            threads=threads,
        )
        squares = samples**2
        value = squares.mean(axis=1) / ns
        stderr = squares.std(axis=1, ddof=1) / np.sqrt(samples.shape[1]) / ns
        return DecayCurve(
            n=ns, value=value, stderr=stderr, method=method, description=f"variance {phi.name}"
        )

    path = cocycle.path
    values = np.empty(ns.size)
    total = 0.0
    slot = 0
    g = np.zeros(cocycle.grid.n_cells)
    for step in range(int(ns[-1])):
        l = t + step
        h = cocycle.density(l)
        phi_l = phi.fiber_values(h, path.beta(l))
        total += integrate(h, phi_l * phi_l) + 2.0 * integrate(h, g * phi_l)
        if step + 1 == ns[slot]:
            values[slot] = max(total, 0.0) / ns[slot]
            slot += 1
        if slot == ns.size:
            break
        g = normalized_step(cocycle.matrix(l), h, cocycle.density(l + 1), g + phi_l)
    return DecayCurve(n=ns, value=values, method=method, description=f"variance {phi.name}")


def operator_sigma2(cocycle: DensityCocycle, phi: Observable, n: int, t: int = 0) -> float:
    """Σ²_{ω,n} by the operator recursion."""
    curve = variance_curve(cocycle, phi, [n], method="operator", t=t)
    return float(curve.value[0] * n)
