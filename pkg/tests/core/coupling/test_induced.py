"""Tests for induced-map constants and the regularity and contraction checks."""

import numpy as np
import pytest

from src.lsvrand.core.coupling import (
    RegularityConstants,
    contraction_check,
    image_mesh,
    induced_constants,
    regularity_check,
)
from src.lsvrand.core.coupling.induced import x_branch, y_branch
from src.lsvrand.core.lsv import map_eval
from src.lsvrand.core.transfer import DensityVector, Grid
from src.lsvrand.errors import NumericalError, RangeError


def test_image_mesh():
    z = image_mesh(257)
    assert z.size == 257
    assert z[0] == pytest.approx(0.5 + 5e-7)
    assert z[-1] == pytest.approx(1.0 - 5e-7)


class TestBranches:
    def test_doubling_y_branch(self, doubling_path):
        z = np.array([0.6, 0.9])
        w, log_deriv = y_branch(doubling_path, 0, 3, z)
        np.testing.assert_allclose(w, 0.5 + z / 8.0)
        np.testing.assert_allclose(log_deriv, 3.0 * np.log(2.0))

    def test_x_branch_reaches_z(self, coin_path):
        z = np.array([0.55, 0.8])
        w, _ = x_branch(coin_path, 0, 4, z)
        for k, beta in enumerate(coin_path.window(0, 4)):
            w = map_eval(float(beta), w)
            if k < 3:
                assert np.all(w < 0.5)
        np.testing.assert_allclose(w, z, rtol=1e-9)


class TestRegularityConstants:
    def test_doubling_constants(self, doubling_path):
        constants = induced_constants(doubling_path, depth=20)
        assert constants.expansion == pytest.approx(2.0)
        assert constants.distortion == pytest.approx(0.0, abs=1e-9)
        assert constants.k2 == pytest.approx(1.0)
        assert constants.k1 == pytest.approx(0.5)
        assert constants.c_u == pytest.approx(2.0 * np.e)
        assert set(constants.to_dict()) >= {"Lambda", "K", "K2", "K1", "C_u"}

    def test_half_constants(self, half_path):
        constants = induced_constants(half_path, depth=30)
        assert constants.expansion >= 2.0
        assert constants.distortion > 0.0
        assert constants.k2 > (1.0 - 1.0 / constants.expansion) * constants.distortion

    def test_not_expanding(self):
        with pytest.raises(NumericalError):
            RegularityConstants.derive(1.0, 0.0)

    def test_threshold_relations(self):
        with pytest.raises(RangeError):
            RegularityConstants(expansion=2.0, distortion=1.0, k2=0.4, k1=1.2)
        with pytest.raises(RangeError):
            RegularityConstants(expansion=2.0, distortion=1.0, k2=1.0, k1=2.0)
        constants = RegularityConstants.derive(2.0, 1.0, k2=3.0)
        assert constants.k1 == pytest.approx(2.5)


class TestRegularityCheck:
    def test_uniform_density_passes(self, doubling_path):
        density = DensityVector.uniform(Grid.uniform(64))
        report = regularity_check(density, doubling_path, 0, 10, k1=0.5)
        assert report.passed
        assert report.worst[1] == pytest.approx(0.0, abs=1e-9)
        assert sorted(report.values) == list(range(1, 11))

    def test_steep_density_fails(self, doubling_path):
        report = regularity_check(lambda x: np.exp(40.0 * x), doubling_path, 0, 5, k1=0.5)
        assert not report.passed
        assert report.worst[0] == 1
        assert report.worst[1] == pytest.approx(20.0, rel=0.05)

    def test_needs_an_element(self, doubling_path):
        with pytest.raises(RangeError):
            regularity_check(lambda x: np.ones_like(x), doubling_path, 0, 0, k1=1.0)


class TestContractionCheck:
    def test_doubling_passes(self, doubling_path):
        constants = induced_constants(doubling_path, depth=10)
        report = contraction_check(doubling_path, constants, n_densities=20, seed=1)
        assert report.passed
        assert report.n_checks == 200
        assert report.worst_margin <= 1e-9

    def test_half_path_passes(self, half_path):
        constants = induced_constants(half_path, depth=25)
        report = contraction_check(half_path, constants, n_densities=30, seed=2)
        assert report.violations == []

    def test_understated_distortion_is_caught(self, half_path):
        measured = induced_constants(half_path, depth=25)
        understated = RegularityConstants.derive(measured.expansion, 0.0, k2=1e-3, depth=25)
        report = contraction_check(half_path, understated, n_densities=5, seed=3)
        assert not report.passed
        assert {"c", "ell", "value", "bound"} <= set(report.violations[0])

    def test_needs_densities(self, doubling_path):
        constants = induced_constants(doubling_path, depth=5)
        with pytest.raises(RangeError):
            contraction_check(doubling_path, constants, n_densities=0)
