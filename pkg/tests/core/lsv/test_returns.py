"""Tests for return times and the return-time structure."""

import numpy as np
import pytest

from src.lsvrand.core.env import EnvironmentPath
from src.lsvrand.core.env.seeds import make_rng
from src.lsvrand.core.lsv import (
    build_return_structure,
    left_inverse,
    return_time,
    return_times,
    tail_u,
)
from src.lsvrand.core.stats import fit_exponent
from src.lsvrand.errors import RangeError


class TestReturnTimes:
    def test_doubling_examples(self, doubling_path):
        assert return_time(doubling_path, 0.75) == (1, False)
        assert return_time(doubling_path, 0.1) == (3, False)

    def test_fixed_point_is_capped(self, doubling_path):
        times, capped = return_times(doubling_path, np.array([0.0, 0.3]), cap=10)
        assert capped.tolist() == [True, False]
        assert times.tolist() == [0, 1]

    def test_cap_defaults_to_window(self):
        path = EnvironmentPath.from_sequence([0.5] * 5)
        _, capped = return_times(path, np.array([1e-6]))
        assert capped[0]


class TestReturnStructure:
    def test_doubling_preimages_are_powers_of_two(self, doubling_path):
        structure = build_return_structure(doubling_path, depth=20)
        np.testing.assert_array_equal(structure.xs(0), 2.0 ** -np.arange(21))
        assert tail_u(structure, 0, 3) == 0.25
        assert structure.y_at(2, 0) == 0.75

    def test_recursion_on_random_path(self, coin_path):
        structure = build_return_structure(coin_path, depth=30, t_min=0, t_max=5)
        for t in range(0, 6):
            for n in range(1, 31):
                expected = left_inverse(coin_path.beta(t), structure.x_at(n - 1, t + 1))
                assert structure.x_at(n, t) == pytest.approx(expected, rel=1e-12)

    def test_tails_start_at_one_and_decrease(self, coin_path):
        structure = build_return_structure(coin_path, depth=100)
        tails = structure.tails(0)
        assert tails[0] == 1.0 and tails[1] == 1.0
        assert np.all(np.diff(tails) <= 0.0)

    def test_exact_tails_match_monte_carlo(self, coin_path):
        structure = build_return_structure(coin_path, depth=50)
        rng = make_rng(17)
        starts = 0.5 + 0.5 * rng.random(200_000)
        times, capped = return_times(coin_path, starts, cap=50)
        resolved = np.where(capped, 51, times)
        for n in range(1, 11):
            p_hat = np.mean(resolved >= n)
            stderr = np.sqrt(max(p_hat * (1.0 - p_hat), 1e-12) / starts.size)
            assert abs(p_hat - tail_u(structure, 0, n)) <= 4.0 * stderr + 1e-12

    def test_half_tail_exponent(self, half_path):
        structure = build_return_structure(half_path, depth=500)
        n = np.arange(1, 501)
        fit = fit_exponent(n, structure.tails(0)[1:], n_lo=10)
        assert fit.slope == pytest.approx(-2.0, abs=0.3)

    def test_to_frame_columns(self, doubling_path):
        frame = build_return_structure(doubling_path, depth=5, t_max=1).to_frame()
        assert list(frame.columns) == ["t", "n", "x_n", "y_n", "u_n"]
        assert len(frame) == 10

    def test_underflow_truncates(self):
        path = EnvironmentPath.from_sequence(np.zeros(1200))
        structure = build_return_structure(path, depth=1100)
        assert structure.truncated
        assert structure.depth < 1100
        assert structure.xs(0)[-1] >= 1e-300

    def test_depth_beyond_path(self, doubling_path):
        with pytest.raises(RangeError):
            build_return_structure(doubling_path, depth=500)

    def test_tail_u_range(self, doubling_path):
        structure = build_return_structure(doubling_path, depth=5)
        with pytest.raises(RangeError):
            tail_u(structure, 0, 0)
        with pytest.raises(RangeError):
            tail_u(structure, 0, 6)
