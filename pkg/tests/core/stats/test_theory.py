"""Tests for predicted rates."""

import math

import pytest

from src.lsvrand.core.stats import predictions
from src.lsvrand.core.stats.theory import (
    asip_mixing_requirement,
    clt_exponent,
    concentration_bound,
    decay_rate,
    is_summable,
    memory_loss_exponent,
    mixing_requirement,
    moment_exponent,
    prefactor_exponent,
    quadratic_clt_exponent,
    return_tail_exponent,
    survey_exponent,
)
from src.lsvrand.errors import RangeError


def test_decay_exponents():
    assert decay_rate(0.5) == pytest.approx(1.0)
    assert memory_loss_exponent(0.25) == pytest.approx(-3.0)
    assert memory_loss_exponent(0.25, s=2.0) == pytest.approx(-1.5)
    assert survey_exponent(0.2, s=1.0) == pytest.approx(4.0)


def test_prefactor_is_at_least_one():
    assert prefactor_exponent(0.5) == 1.0
    assert prefactor_exponent(0.2) == pytest.approx(4.0)


def test_return_tail():
    assert return_tail_exponent(0.5) == pytest.approx(-2.0)
    with pytest.raises(RangeError):
        return_tail_exponent(0.0)


def test_moment_and_clt_exponents():
    assert moment_exponent() == 0.5
    assert moment_exponent(p=4.0, r=8.0) == pytest.approx(0.875)
    assert quadratic_clt_exponent(2.0) == pytest.approx(0.0)
    assert quadratic_clt_exponent(math.inf) == pytest.approx(-0.2)
    assert clt_exponent(2.0) == pytest.approx(-0.2)
    with pytest.raises(RangeError):
        clt_exponent(0.5)


def test_mixing_requirements():
    assert mixing_requirement(0.5, 4.0) == pytest.approx(6.0)
    assert asip_mixing_requirement(0.25) is None
    assert asip_mixing_requirement(0.1) == pytest.approx(2.0 / (0.5 / 0.9) * 9.0 + 2.0)
    assert asip_mixing_requirement(0.1, r=8.0) is None


def test_concentration_bound():
    assert concentration_bound(1.0, 100, 1.0, 2.0) == pytest.approx(0.01)
    assert concentration_bound(0.001, 1, 1.0, 2.0) == 1.0
    with pytest.raises(RangeError):
        concentration_bound(0.0, 10, 1.0, 2.0)


def test_summability():
    assert is_summable(1.5)
    assert not is_summable(1.0)


def test_gamma_range():
    with pytest.raises(RangeError):
        decay_rate(1.0)


class TestPredictions:
    def test_values(self):
        prediction = predictions(0.25)
        assert prediction.get("decay") == pytest.approx(-3.0)
        assert prediction.get("measure_tail") == pytest.approx(-3.0)
        assert prediction.get("coupling") == pytest.approx(-3.0)
        assert prediction.get("return_tails") == pytest.approx(-4.0)
        assert prediction.get("moments") == 0.5
        assert prediction.get("survey") == pytest.approx(3.0)
        assert prediction.get("asip_q") is None
        assert prediction.get("unknown") is None
        assert prediction.warnings == []

    def test_invariance_requirement(self):
        assert predictions(0.1).get("asip_q") == pytest.approx(asip_mixing_requirement(0.1))
        assert predictions(0.1, r=8.0).get("asip_q") is None

    def test_half_is_not_summable(self):
        prediction = predictions(0.5)
        assert len(prediction.warnings) == 1
        assert "non-summable" in prediction.warnings[0]

    def test_slow_mixing_warning(self):
        prediction = predictions(0.25, p=4.0, q=5.0)
        assert any("mixing rate" in warning for warning in prediction.warnings)
        assert not predictions(0.25, p=4.0, q=50.0).warnings
