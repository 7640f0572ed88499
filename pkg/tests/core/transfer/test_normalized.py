"""Tests for the normalized transfer operator."""

import numpy as np
import pytest

from src.lsvrand.core.transfer import (
    DensityVector,
    Grid,
    compose,
    integrate,
    normalized_push,
    normalized_step,
    ulam_matrix,
)
from src.lsvrand.errors import RangeError, ShapeError, SingularDensityError


def test_constants_are_fixed(coin_cocycle, geometric_grid):
    ones = np.ones(geometric_grid.n_cells)
    np.testing.assert_allclose(normalized_push(coin_cocycle, 0, 12, ones), 1.0, rtol=1e-10)


def test_duality(coin_cocycle, geometric_grid):
    rng = np.random.default_rng(5)
    g = rng.standard_normal(geometric_grid.n_cells)
    f = rng.standard_normal(geometric_grid.n_cells)
    h3, h4 = coin_cocycle.density(3), coin_cocycle.density(4)
    matrix = coin_cocycle.matrix(3)
    lhs = integrate(h4, normalized_step(matrix, h3, h4, g) * f)
    rhs = integrate(h3, g * compose(matrix, f))
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-14)


def test_doubling_push_averages_branches(doubling_cocycle, uniform_grid):
    g = np.where(uniform_grid.midpoints < 0.5, 1.0, -1.0)
    pushed = normalized_push(doubling_cocycle, 0, 1, g)
    np.testing.assert_allclose(pushed, 0.0, atol=1e-12)


def test_explicit_densities_are_used(doubling_cocycle, uniform_grid):
    densities = doubling_cocycle.densities(0, 3)
    g = uniform_grid.midpoints
    np.testing.assert_array_equal(
        normalized_push(doubling_cocycle, 0, 3, g, densities=densities),
        normalized_push(doubling_cocycle, 0, 3, g),
    )
    with pytest.raises(RangeError):
        normalized_push(doubling_cocycle, 0, 3, g, densities=densities[:2])


def test_vanishing_density_is_reported():
    grid = Grid.uniform(4)
    h_to = DensityVector(values=np.array([2.0, 2.0, 0.0, 0.0]), grid=grid)
    with pytest.raises(SingularDensityError) as excinfo:
        normalized_step(ulam_matrix(0.0, grid), DensityVector.uniform(grid), h_to, np.ones(4))
    assert excinfo.value.cell == 2


def test_shape_mismatch(doubling_cocycle):
    d = doubling_cocycle.density(0)
    with pytest.raises(ShapeError):
        normalized_step(doubling_cocycle.matrix(0), d, d, np.ones(3))


def test_compose_is_exact_for_doubling():
    grid = Grid.uniform(4)
    f = np.array([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_allclose(compose(ulam_matrix(0.0, grid), f), [1.5, 3.5, 1.5, 3.5])
