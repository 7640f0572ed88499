"""Tests for decay curves and exponent fits."""

import numpy as np
import pytest

from src.lsvrand.core.stats import DecayCurve, Estimate, ExponentFit, fit_exponent
from src.lsvrand.errors import ConfigurationError, RangeError


class TestFitExponent:
    def test_exact_power_law(self):
        n = np.arange(1, 501)
        fit = fit_exponent(n, 3.0 * n**-1.5)
        assert fit.slope == pytest.approx(-1.5, abs=1e-10)
        assert np.exp(fit.intercept) == pytest.approx(3.0, rel=1e-9)
        assert fit.r2 == pytest.approx(1.0)
        assert fit.window == (20, 500)
        assert fit.n_points == 481

    def test_window_bounds(self):
        n = np.arange(1, 101)
        fit = fit_exponent(n, n**-2.0, n_lo=10, n_hi=50)
        assert fit.window == (10, 50)

    def test_noisy_points_are_dropped(self):
        n = np.arange(1, 101, dtype=float)
        value = n**-1.0
        stderr = np.where(n > 60, value, 0.01 * value)
        fit = fit_exponent(n, value, stderr, n_lo=1)
        assert fit.window == (1, 60)
        assert fit.slope == pytest.approx(-1.0, abs=1e-10)

    def test_zero_values_are_skipped(self):
        n = np.arange(1, 41)
        value = np.where(n % 2 == 0, n**-2.0, 0.0)
        assert fit_exponent(n, value, n_lo=1).slope == pytest.approx(-2.0, abs=1e-10)

    def test_too_few_points(self):
        with pytest.raises(RangeError):
            fit_exponent([25, 30], [1.0, 0.0])

    def test_to_dict(self):
        data = fit_exponent(np.arange(1, 50), np.arange(1, 50) ** -1.0).to_dict()
        assert set(data) == {"slope", "intercept", "r2", "window", "n_points"}
        assert data["window"] == [20, 49]


class TestDecayCurve:
    def test_validation(self):
        with pytest.raises(ConfigurationError):
            DecayCurve(n=[1, 1], value=[0.1, 0.2])
        with pytest.raises(ConfigurationError):
            DecayCurve(n=[1, 2], value=[0.1, -0.2])
        with pytest.raises(ConfigurationError):
            DecayCurve(n=[1, 2], value=[0.1])

    def test_default_stderr_and_frame(self):
        curve = DecayCurve(n=[1, 2, 3], value=[0.5, 0.25, 0.125], method="monte-carlo")
        frame = curve.to_frame()
        assert list(frame.columns) == ["n", "value", "stderr", "method"]
        assert frame["stderr"].tolist() == [0.0, 0.0, 0.0]
        assert set(frame["method"]) == {"monte-carlo"}
        assert len(curve) == 3

    def test_fit_uses_curve_points(self):
        n = np.arange(1, 200)
        curve = DecayCurve(n=n, value=n**-0.5)
        assert curve.fit(n_lo=5).slope == pytest.approx(-0.5, abs=1e-10)


def test_empty_window_is_rejected():
    with pytest.raises(ConfigurationError):
        ExponentFit(slope=0.0, intercept=0.0, r2=1.0, window=(5, 2), n_points=0)


def test_estimates_agree_within_sigma():
    assert Estimate(1.0, 0.1).agrees_with(Estimate(1.3, 0.0))
    assert not Estimate(1.0, 0.1).agrees_with(Estimate(1.3, 0.0), n_sigma=2.0)
    assert Estimate(1.0).agrees_with(Estimate(1.01), floor=0.02)
