"""
Observables

A fiber observable has the form φ_ω(x) = weight(β(ω)) · base(x) with a
bounded weight. Centering subtracts μ_ω(φ_ω) fiber by fiber; since the
fiber means need the equivariant densities, the centered flag is carried
along and resolved where densities are available.
"""

from dataclasses import dataclass, replace
from typing import Callable, Dict, Optional

import numpy as np

from ...errors import ConfigurationError
from ..lsv.maps import map_eval
from ..transfer.density import DensityVector, integrate
from ..transfer.grid import Grid

BaseFunction = Callable[[np.ndarray], np.ndarray]
WeightFunction = Callable[[float], float]

LIP_SAMPLES = 4097


def _one(beta: float) -> float:
    return 1.0


@dataclass(frozen=True)
class Observable:
    """φ_ω(x) = scale · weight(β) · base(x).

    Attributes:
        base: Vectorized function on [0, 1]
        name: Label used in outputs
        weight: Bounded function of β
        centered: Subtract μ_ω(φ_ω) on each fiber
        scale: Constant factor
    """

    base: BaseFunction
    name: str = "phi"
    weight: WeightFunction = _one
    centered: bool = False
    scale: float = 1.0

    def evaluate(self, x: np.ndarray, beta: float) -> np.ndarray:
        """Uncentered values at points x on the fiber with parameter β."""
        values = np.asarray(self.base(np.asarray(x, dtype=float)), dtype=float)
        return self.scale * self.weight(beta) * np.broadcast_to(values, np.shape(x)).copy()

    def on_grid(self, grid: Grid, beta: float) -> np.ndarray:
        """Uncentered values at cell midpoints."""
        return self.evaluate(grid.midpoints, beta)

    def fiber_values(self, density: DensityVector, beta: float) -> np.ndarray:
        """Cell values of φ_ω, centered against ``density`` if requested."""
        values = self.on_grid(density.grid, beta)
        if self.centered:
            values = values - integrate(density, values)
        return values

    def fiber_mean(self, density: DensityVector, beta: float) -> float:
        """Offset subtracted by centering (0 when uncentered)."""
        if not self.centered:
            return 0.0
        return integrate(density, self.on_grid(density.grid, beta))

    def lip_norm(self, beta: float) -> float:
        """sup|φ| + Lip(φ) estimated on a fine uniform mesh."""
        x = np.linspace(0.0, 1.0, LIP_SAMPLES)
        values = self.evaluate(x, beta)
        slopes = np.abs(np.diff(values)) / np.diff(x)
        return float(np.abs(values).max() + slopes.max())

    def scaled(self, factor: float) -> "Observable":
        return replace(self, scale=self.scale * factor, name=f"{factor:g}*{self.name}")

    def centering(self) -> "Observable":
        return replace(self, centered=True)


@dataclass(frozen=True)
class Coboundary(Observable):
    """φ_ω = ψ - ψ ∘ T_ω, whose Birkhoff sums telescope."""

    def evaluate(self, x: np.ndarray, beta: float) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        psi = np.asarray(self.base(x), dtype=float)
        psi_next = np.asarray(self.base(np.asarray(map_eval(beta, x))), dtype=float)
        return self.scale * self.weight(beta) * (psi - psi_next)


BASE_FUNCTIONS: Dict[str, BaseFunction] = {
    "zero": lambda x: np.zeros_like(x),
    "one": lambda x: np.ones_like(x),
    "x": lambda x: x,
    "x_minus_half": lambda x: x - 0.5,
    "x_squared": lambda x: x * x,
    "cos2pi": lambda x: np.cos(2.0 * np.pi * x),
    "abs_x_minus_half": lambda x: np.abs(x - 0.5),
}


def linear_weight(a: float, b: float) -> WeightFunction:
    """β ↦ a + bβ, bounded on [0, 1)."""

    def weight(beta: float) -> float:
        return a + b * beta

    return weight


def make_observable(
    base: str,
    centered: bool = False,
    weight: Optional[WeightFunction] = None,
    coboundary: bool = False,
    scale: float = 1.0,
) -> Observable:
    """Observable from a registered base function name.

    Args:
        base: Key of BASE_FUNCTIONS
        centered: Center fiberwise
        weight: Fiber weight, default constant 1
        coboundary: Build ψ - ψ ∘ T_ω with ψ = base
        scale: Constant factor

    Returns:
        Observable or Coboundary
    """
    if base not in BASE_FUNCTIONS:
        raise ConfigurationError(
            f"unknown observable '{base}'; expected one of {sorted(BASE_FUNCTIONS)}"
        )
    cls = Coboundary if coboundary else Observable
    name = f"cob({base})" if coboundary else base
    return cls(
        base=BASE_FUNCTIONS[base],
        name=name,
        weight=weight or _one,
        centered=centered,
        scale=scale,
    )
