"""Tests for cell grids."""

import numpy as np
import pytest

from src.lsvrand.core.transfer import Grid
from src.lsvrand.errors import ConfigurationError, ShapeError


def test_uniform_even():
    grid = Grid.uniform(4)
    np.testing.assert_array_equal(grid.boundaries, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert grid.half_index == 2
    assert grid.descriptor == "uniform:4"


def test_uniform_odd_inserts_half():
    grid = Grid.uniform(3)
    assert grid.n_cells == 4
    assert 0.5 in grid.boundaries


def test_geometric_refines_towards_zero():
    grid = Grid.geometric(8, 2.0)
    np.testing.assert_allclose(grid.boundaries[:5], 0.5 * (np.arange(5) / 4.0) ** 2)
    np.testing.assert_allclose(grid.boundaries[4:], [0.5, 0.625, 0.75, 0.875, 1.0])
    assert grid.widths[0] < grid.widths[3]
    assert grid.descriptor == "geometric:8:2"


def test_geometric_needs_even_cells():
    with pytest.raises(ConfigurationError):
        Grid.geometric(7)


def test_from_kind():
    assert Grid.from_kind("uniform", 8).kind == "uniform"
    assert Grid.from_kind("geometric", 8, 1.5).refine_exponent == 1.5
    with pytest.raises(ConfigurationError):
        Grid.from_kind("chebyshev", 8)


def test_boundaries_must_contain_half():
    with pytest.raises(ConfigurationError):
        Grid(boundaries=np.array([0.0, 0.4, 1.0]))


def test_boundaries_must_increase():
    with pytest.raises(ConfigurationError):
        Grid(boundaries=np.array([0.0, 0.5, 0.5, 1.0]))


def test_locate_puts_one_in_last_cell():
    grid = Grid.uniform(4)
    np.testing.assert_array_equal(grid.locate([0.0, 0.3, 0.5, 1.0]), [0, 1, 2, 3])


def test_same_as_and_require_same():
    a = Grid.uniform(8)
    b = Grid.uniform(8)
    assert a.same_as(b)
    with pytest.raises(ShapeError):
        a.require_same(Grid.geometric(8))
