"""Tests for densities, the Ulam cocycle and equivariant densities."""

import numpy as np
import pytest

from src.lsvrand.core.env import EnvironmentPath
from src.lsvrand.core.transfer import (
    DensityCocycle,
    DensityVector,
    Grid,
    UlamFamily,
    cone_report,
    equivariant_density,
    integrate,
    l1_distance,
    lp_norm,
    push_density,
    tv_distance_curve,
    ulam_matrix,
)
from src.lsvrand.errors import ConfigurationError, RangeError, ShapeError


class TestDensityVector:
    def test_normalized_has_unit_mass(self, geometric_grid):
        d = DensityVector.normalized(np.arange(1, 513, dtype=float), geometric_grid)
        assert d.mass() == pytest.approx(1.0, abs=1e-12)
        d.validate()

    def test_rejects_negative_and_empty(self, uniform_grid):
        with pytest.raises(ConfigurationError):
            DensityVector.normalized(-np.ones(256), uniform_grid)
        with pytest.raises(ConfigurationError):
            DensityVector.normalized(np.zeros(256), uniform_grid)

    def test_validate_catches_mass_defect(self, uniform_grid):
        with pytest.raises(ConfigurationError):
            DensityVector(values=np.full(256, 1.01), grid=uniform_grid).validate()

    def test_shape_is_checked(self, uniform_grid):
        with pytest.raises(ShapeError):
            DensityVector(values=np.ones(10), grid=uniform_grid)

    def test_to_frame(self):
        frame = DensityVector.uniform(Grid.uniform(4)).to_frame()
        assert list(frame.columns) == ["cell", "left", "right", "density"]
        assert frame["right"].iloc[-1] == 1.0


class TestIntegrals:
    def test_integrate_identity(self, uniform_grid):
        d = DensityVector.uniform(uniform_grid)
        assert integrate(d, uniform_grid.midpoints) == pytest.approx(0.5)

    def test_lp_norms(self):
        grid = Grid.uniform(4)
        d = DensityVector.uniform(grid)
        f = np.array([1.0, -2.0, 0.0, 1.0])
        assert lp_norm(d, f, 1) == pytest.approx(1.0)
        assert lp_norm(d, f, 2) == pytest.approx(np.sqrt(1.5))
        assert lp_norm(d, f, np.inf) == 2.0

    def test_sup_norm_ignores_null_cells(self):
        grid = Grid.uniform(4)
        d = DensityVector(values=np.array([0.0, 2.0, 2.0, 0.0]), grid=grid)
        assert lp_norm(d, np.array([9.0, 1.0, -1.0, 9.0]), np.inf) == 1.0

    def test_lp_rejects_small_exponent(self, uniform_grid):
        with pytest.raises(ConfigurationError):
            lp_norm(DensityVector.uniform(uniform_grid), np.ones(256), 0.5)

    def test_l1_distance(self):
        grid = Grid.uniform(2)
        a = DensityVector(values=np.array([2.0, 0.0]), grid=grid)
        b = DensityVector.uniform(grid)
        assert l1_distance(a, b) == pytest.approx(1.0)


def test_push_density_checks_grid(uniform_grid):
    with pytest.raises(ShapeError):
        push_density([ulam_matrix(0.2, Grid.uniform(8))], DensityVector.uniform(uniform_grid))


def test_push_density_keeps_mass(geometric_grid):
    matrices = [ulam_matrix(beta, geometric_grid) for beta in (0.1, 0.6, 0.3)]
    pushed = push_density(matrices, DensityVector.uniform(geometric_grid))
    assert pushed.mass() == pytest.approx(1.0, abs=1e-12)
    assert pushed.values.min() >= 0.0


class TestDensityCocycle:
    def test_doubling_densities_are_uniform(self, doubling_cocycle):
        for t in (0, 5, 40):
            np.testing.assert_allclose(doubling_cocycle.density(t).values, 1.0, atol=1e-12)

    def test_densities_have_unit_mass(self, coin_cocycle):
        for t in (0, 3, 17):
            coin_cocycle.density(t).validate()

    def test_equivariance(self, coin_cocycle):
        pushed = push_density([coin_cocycle.matrix(4)], coin_cocycle.density(4))
        np.testing.assert_allclose(pushed.values, coin_cocycle.density(5).values, rtol=1e-12)

    def test_matches_explicit_pullback(self, coin_cocycle):
        np.testing.assert_allclose(
            coin_cocycle.density(6).values, coin_cocycle.pullback(6, 406).values, rtol=1e-12
        )

    def test_request_order_does_not_matter(self, coin_path, geometric_grid):
        family = UlamFamily(geometric_grid)
        forward = DensityCocycle(coin_path, geometric_grid, n_pull=200, family=family)
        backward = DensityCocycle(coin_path, geometric_grid, n_pull=200, family=family, memory=2)
        expected = [forward.density(t).values for t in range(8)]
        got = {t: backward.density(t).values for t in reversed(range(8))}
        for t in range(8):
            np.testing.assert_array_equal(got[t], expected[t])

    def test_pullback_converges(self, coin_cocycle):
        estimate = coin_cocycle.estimate(0)
        assert estimate.n_pull == 400
        assert estimate.l1_defect < 1e-2

    def test_densities_before_t0(self, coin_cocycle):
        with pytest.raises(RangeError):
            coin_cocycle.density(-1)

    def test_iter_densities(self, doubling_cocycle):
        shifts = [t for t, _ in doubling_cocycle.iter_densities(2, 3)]
        assert shifts == [2, 3, 4, 5]
        assert len(doubling_cocycle.densities(0, 4)) == 5

    def test_needs_past(self, doubling_path, uniform_grid):
        with pytest.raises(RangeError):
            DensityCocycle(doubling_path, uniform_grid, n_pull=500)

    def test_family_on_other_grid(self, doubling_path, uniform_grid):
        with pytest.raises(ShapeError):
            DensityCocycle(
                doubling_path, uniform_grid, n_pull=10, family=UlamFamily(Grid.uniform(8))
            )


def test_equivariant_density_of_constant_map():
    grid = Grid.geometric(256)
    path = EnvironmentPath.from_sequence(np.full(801, 0.3), n_past=800)
    estimate = equivariant_density(path, 0, 800, grid)
    estimate.density.validate()
    report = cone_report(estimate.density, 0.3)
    assert report["global_min"] > 0.0
    assert report["min_on_y"] > 0.0
    # density is largest next to the indifferent fixed point
    assert estimate.density.values[0] == estimate.density.values.max()


def test_tv_distance_never_increases(coin_cocycle, geometric_grid):
    a = DensityVector.uniform(geometric_grid)
    b = DensityVector.normalized(geometric_grid.midpoints, geometric_grid)
    n, distance = tv_distance_curve(coin_cocycle, a, b, 0, 30)
    assert n.tolist() == list(range(31))
    assert np.all(np.diff(distance) <= 1e-12)
    assert distance[-1] < distance[0]
