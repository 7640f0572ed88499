"""Tests for annealed correlations and the annealed variance."""

import logging

import numpy as np
import pytest

from src.lsvrand.core.env import ConstantLaw
from src.lsvrand.core.stats import (
    annealed_correlation,
    annealed_correlations,
    annealed_variance,
    make_observable,
    variance_from_correlations,
)
from src.lsvrand.core.stats.annealed import AnnealedCorrelations
from src.lsvrand.core.transfer import Grid
from src.lsvrand.errors import ConfigurationError, RangeError


@pytest.fixture(scope="module")
def centered_x():
    return make_observable("x_minus_half", centered=True)


def synthetic(values, n_paths=2):
    values = np.asarray(values, dtype=float)
    replicas = np.tile(values, (n_paths, 1))
    return AnnealedCorrelations(
        value=values, stderr=np.zeros_like(values), replicas=replicas, method="operator"
    )


class TestAnnealedCorrelations:
    def test_shapes_and_frame(self, coin_law, centered_x):
        grid = Grid.geometric(128)
        curve = annealed_correlations(
            coin_law, centered_x, 10, 3, 0, seed=4, grid=grid, n_pull=100, method="operator"
        )
        assert curve.replicas.shape == (3, 11)
        assert curve.n.tolist() == list(range(11))
        assert list(curve.to_frame().columns) == ["n", "value", "stderr", "method"]
        assert curve[0].value > 0.0

    def test_independent_of_threads(self, coin_law, centered_x):
        kwargs = dict(seed=5, grid=Grid.geometric(64), n_pull=60, method="monte-carlo")
        one = annealed_correlations(coin_law, centered_x, 5, 4, 2000, threads=1, **kwargs)
        four = annealed_correlations(coin_law, centered_x, 5, 4, 2000, threads=4, **kwargs)
        np.testing.assert_array_equal(one.replicas, four.replicas)

    def test_constant_doubling_law(self, centered_x):
        grid = Grid.uniform(256)
        estimate = annealed_correlation(
            ConstantLaw(0.0), centered_x, 2, 2, 0, seed=1, grid=grid, n_pull=10, method="operator"
        )
        assert estimate.value == pytest.approx(0.25 / 12.0 - 4.0 / (12.0 * 256**2), rel=1e-9)
        assert estimate.stderr == pytest.approx(0.0, abs=1e-15)

    def test_needs_paths(self, coin_law, centered_x):
        with pytest.raises(RangeError):
            annealed_correlations(coin_law, centered_x, 3, 0, 10, 1, Grid.uniform(8), 10)

    def test_method_is_checked(self, coin_law, centered_x):
        with pytest.raises(ConfigurationError):
            annealed_correlations(
                coin_law, centered_x, 3, 1, 10, 1, Grid.uniform(8), 10, method="exact"
            )


class TestVarianceFromCorrelations:
    def test_power_law_tail(self):
        n = np.arange(1, 51, dtype=float)
        result = variance_from_correlations(synthetic(np.concatenate([[1.0], n**-3.0])))
        assert result.summable
        assert result.fit.slope == pytest.approx(-3.0, abs=1e-9)
        assert result.value == pytest.approx(1.0 + 2.0 * 1.2020569031595942, abs=1e-5)
        assert result.truncation_error == pytest.approx(50.5**-2.0, rel=1e-6)
        assert result.stderr == 0.0

    def test_slow_decay_is_not_summable(self, caplog):
        n = np.arange(1, 41, dtype=float)
        with caplog.at_level(logging.WARNING):
            result = variance_from_correlations(synthetic(np.concatenate([[1.0], n**-0.5])))
        assert not result.summable
        assert result.value is None
        assert result.truncation_error == float("inf")
        assert "not summable" in caplog.text

    def test_short_series_has_no_fit(self):
        result = variance_from_correlations(synthetic([1.0, 0.5, 0.25, 0.125]))
        assert result.fit is None
        assert result.value == pytest.approx(2.75)
        assert result.truncation_error == pytest.approx(0.25)

    def test_spread_across_paths(self):
        correlations = AnnealedCorrelations(
            value=np.array([1.0, 0.0]),
            stderr=np.zeros(2),
            replicas=np.array([[1.0, 0.1], [1.0, -0.1]]),
            method="monte-carlo",
        )
        result = variance_from_correlations(correlations)
        assert result.stderr == pytest.approx(0.2)


def test_annealed_doubling_variance(centered_x):
    grid = Grid.uniform(256)
    result = annealed_variance(
        ConstantLaw(0.0), centered_x, 20, 2, 0, seed=3, grid=grid, n_pull=10, method="operator"
    )
    assert result.summable
    assert result.value == pytest.approx(0.25, abs=5e-3)
