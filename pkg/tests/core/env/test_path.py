"""Tests for environment paths, counting statistics and N_eps."""

import numpy as np
import pytest

from src.lsvrand.core.env import (
    ConstantLaw,
    EnvironmentPath,
    IidDiscreteLaw,
    b0_of,
    count_below,
    n_eps,
    n_eps_survey,
    sample_path,
)
from src.lsvrand.errors import ConfigurationError, RangeError


@pytest.fixture
def alternating_path():
    """β = 0.1 at even shifts and 0.9 at odd shifts, t in [-20, 20]."""
    betas = [0.1 if k % 2 == 0 else 0.9 for k in range(41)]
    return EnvironmentPath.from_sequence(betas, n_past=20)


class TestEnvironmentPath:
    def test_index_shift(self):
        path = EnvironmentPath.from_sequence([0.1, 0.2, 0.3, 0.4], n_past=1)
        assert path.beta(-1) == 0.1
        assert path.beta(0) == 0.2
        np.testing.assert_array_equal(path.window(0, 3), [0.2, 0.3, 0.4])
        assert (path.t_min, path.t_max) == (-1, 2)

    def test_out_of_range_raises(self):
        path = EnvironmentPath.from_sequence([0.1, 0.2, 0.3], n_past=0)
        with pytest.raises(RangeError):
            path.beta(3)
        with pytest.raises(RangeError):
            path.window(-1, 2)

    def test_betas_are_read_only(self):
        path = EnvironmentPath.from_sequence([0.1, 0.2])
        with pytest.raises(ValueError):
            path.betas[0] = 0.5

    def test_rejects_bad_entries(self):
        with pytest.raises(ConfigurationError):
            EnvironmentPath.from_sequence([0.1, 1.0])
        with pytest.raises(ConfigurationError):
            EnvironmentPath.from_sequence([0.1, 0.2], n_past=2)

    def test_to_frame(self):
        frame = EnvironmentPath.from_sequence([0.1, 0.2, 0.3], n_past=1).to_frame()
        assert list(frame.columns) == ["t", "beta"]
        assert frame["t"].tolist() == [-1, 0, 1]

    def test_is_constant(self, doubling_path, coin_path):
        assert doubling_path.is_constant()
        assert not coin_path.is_constant()


class TestSamplePath:
    def test_same_seed_same_path(self, coin_law):
        a = sample_path(coin_law, 50, 50, seed=9)
        b = sample_path(coin_law, 50, 50, seed=9)
        np.testing.assert_array_equal(a.betas, b.betas)
        assert a.seed == 9 and a.law is coin_law

    def test_longer_future_keeps_prefix(self, coin_law):
        short = sample_path(coin_law, 50, 50, seed=9)
        long = sample_path(coin_law, 50, 500, seed=9)
        np.testing.assert_array_equal(short.window(-50, 51), long.window(-50, 51))

    def test_rejects_negative_lengths(self, coin_law):
        with pytest.raises(ConfigurationError):
            sample_path(coin_law, -1, 5, seed=0)


class TestCounting:
    def test_count_below_both_directions(self, alternating_path):
        assert count_below(alternating_path, 0.5, 5) == 3
        assert count_below(alternating_path, 0.5, 5, direction="backward") == 3
        assert count_below(alternating_path, 0.5, 0) == 0

    def test_count_below_bad_direction(self, alternating_path):
        with pytest.raises(ConfigurationError):
            count_below(alternating_path, 0.5, 3, direction="sideways")

    def test_b0_of_rejects_gamma_outside(self, coin_law):
        with pytest.raises(ConfigurationError):
            b0_of(coin_law, 1.0)

    def test_b0_of_zero_is_returned(self, coin_law):
        assert b0_of(coin_law, 0.05) == 0.0


class TestNEps:
    def test_constant_path_is_regular(self, doubling_path):
        assert n_eps(doubling_path, 0.5, 1.0, 0.1, 100) == (0, False)

    def test_alternating_path(self, alternating_path):
        # (n+1)/(2n) leaves [0.45, 0.55] for odd n < 10
        assert n_eps(alternating_path, 0.5, 0.5, 0.1, 20) == (9, False)

    def test_saturation_flag(self, alternating_path):
        value, saturated = n_eps(alternating_path, 0.5, 0.5, 0.1, 9)
        assert value == 9 and saturated

    def test_horizon_beyond_window(self, alternating_path):
        with pytest.raises(RangeError):
            n_eps(alternating_path, 0.5, 0.5, 0.1, 21)

    def test_epsilon_range(self, alternating_path):
        with pytest.raises(ConfigurationError):
            n_eps(alternating_path, 0.5, 0.5, 0.5, 10)


class TestNEpsSurvey:
    def test_columns_and_prefactor(self, coin_law):
        survey = n_eps_survey(coin_law, 0.2, 0.1, 100, 5, seed=1)
        assert list(survey.columns) == ["replica", "n_eps", "saturated", "prefactor"]
        assert len(survey) == 5
        np.testing.assert_allclose(survey["prefactor"], (1.0 + survey["n_eps"]) ** 4.0)

    def test_constant_law_has_no_violations(self):
        survey = n_eps_survey(ConstantLaw(0.1), 0.5, 0.1, 50, 3, seed=0)
        assert survey["n_eps"].tolist() == [0, 0, 0]

    def test_zero_b0_rejected(self):
        with pytest.raises(ConfigurationError):
            n_eps_survey(IidDiscreteLaw([0.6], [1.0]), 0.5, 0.1, 10, 2, seed=0)
