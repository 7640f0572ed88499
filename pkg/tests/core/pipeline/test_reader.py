"""Tests for the experiment config reader."""

import pytest

from src.lsvrand.core.env import ConstantLaw, IidDiscreteLaw
from src.lsvrand.core.pipeline.reader import (
    Check,
    ConfigReader,
    blob_hash,
    parse_config,
    read_config,
)
from src.lsvrand.errors import ConfigurationError
from tests.doubles import merge, write_config


def test_parse_minimal_config(base_config):
    """Test that the smallest mapping fills every section with defaults."""
    config = parse_config(base_config)
    assert config.gamma == 0.5
    assert config.epsilon == 0.1
    assert config.grid.kind == "uniform"
    assert config.series.ns == [100, 200, 500, 1000]
    assert config.coupling.first_tail == "return"
    assert config.checks == {}
    assert config.grid.cache_dir is None
    assert config.decay.reference_beta is None
    assert isinstance(config.build_law(), ConstantLaw)
    assert config.build_grid().n_cells == 64


def test_observable2_defaults_to_observable(base_config):
    config = parse_config(merge(base_config, {"observable": {"base": "cos2pi"}}))
    assert config.build_observable2().name == config.build_observable().name


def test_discrete_law(base_config):
    data = merge(
        base_config,
        {"law": {"kind": "iid-discrete", "values": [0.1, 0.4], "probs": [0.5, 0.5]}},
    )
    data["law"].pop("beta")
    assert isinstance(parse_config(data).build_law(), IidDiscreteLaw)


@pytest.mark.parametrize("version", [None, 2, "1"])
def test_schema_version_is_required(base_config, version):
    data = dict(base_config)
    if version is None:
        data.pop("schema_version")
    else:
        data["schema_version"] = version
    with pytest.raises(ConfigurationError, match="unsupported schema_version"):
        parse_config(data)


@pytest.mark.parametrize(
    "overrides,field",
    [
        ({"gamma": 1.0}, "gamma"),
        ({"colour": "red"}, "colour"),
        ({"grid": {"cells": 8}}, "grid.cells"),
        ({"law": {"kind": "iid-uniform"}}, "law"),
        ({"observable": {"base": "sinh"}}, "observable.base"),
        ({"decay": {"s": 5, "i": 2}}, "decay"),
        ({"decay": {"reference_beta": 0.45, "dominance_from": 500}}, "decay"),
        ({"decay": {"reference_beta": 1.0}}, "decay.reference_beta"),
        ({"series": {"ns": [100, 50]}}, "series.ns"),
        ({"mc": {"seed": -1}}, "mc.seed"),
    ],
)
def test_schema_violations_name_the_field(base_config, overrides, field):
    """Test that validation errors are reported as ConfigurationError with their location."""
    with pytest.raises(ConfigurationError) as excinfo:
        parse_config(merge(base_config, overrides), source="bad.toml")
    assert str(excinfo.value).startswith("bad.toml:")
    assert field in str(excinfo.value)


def test_missing_law_parameters_are_listed(base_config):
    data = merge(base_config, {"law": {"kind": "iid-discrete"}})
    data["law"].pop("beta")
    with pytest.raises(ConfigurationError, match="values, probs"):
        parse_config(data)


def test_config_is_frozen(base_config):
    config = parse_config(base_config)
    with pytest.raises(Exception):
        config.gamma = 0.3


class TestCheck:
    def test_within(self):
        rule = Check(tolerance=0.1)
        assert rule.passes(-1.05, -1.0)
        assert not rule.passes(-1.2, -1.0)

    def test_expected_overrides_prediction(self):
        rule = Check(expected=0.25, tolerance=0.01)
        assert rule.passes(0.255, -3.0)

    def test_bounds(self):
        assert Check(expected=0.0, tolerance=1e-12, mode="at_most").passes(5e-13, None)
        assert not Check(expected=4.0, mode="at_most").passes(4.5, None)
        assert Check(expected=2.0, mode="at_least").passes(2.0, None)

    def test_no_target(self):
        assert Check(tolerance=1.0).passes(0.3, None) is None
        assert Check(expected=1.0).passes(None, None) is None

    def test_checks_are_parsed(self, base_config):
        config = parse_config(
            merge(base_config, {"checks": {"duality": {"expected": 4.0, "mode": "at_most"}}})
        )
        assert config.checks["duality"].mode == "at_most"


def test_blob_hash_matches_git():
    assert blob_hash(b"") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391"
    assert blob_hash(b"hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a"


class TestConfigReader:
    def test_missing_file(self, temp_output_dir):
        with pytest.raises(ConfigurationError, match="does not exist"):
            ConfigReader(str(temp_output_dir / "absent.toml"))

    def test_bad_toml(self, temp_output_dir):
        path = temp_output_dir / "broken.toml"
        path.write_text("gamma = = 0.5\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="broken.toml"):
            ConfigReader(str(path)).read()

    def test_read_config_returns_hash(self, temp_output_dir, base_config):
        path = write_config(temp_output_dir, base_config)
        config, config_hash = read_config(str(path))
        assert config.n_pull == 50
        assert config_hash == blob_hash(path.read_bytes())

    def test_hash_follows_bytes(self, temp_output_dir, base_config):
        first = write_config(temp_output_dir, base_config, "a.toml")
        second = write_config(temp_output_dir, merge(base_config, {"n_pull": 51}), "b.toml")
        assert ConfigReader(str(first)).config_hash != ConfigReader(str(second)).config_hash


def test_bundled_configs_parse(configs_dir):
    paths = sorted(configs_dir.glob("*.toml"))
    assert paths
    for path in paths:
        config, _ = read_config(str(path))
        config.build_law()
        config.build_grid()


def test_dominance_config(configs_dir):
    config, _ = read_config(str(configs_dir / "random_coin_decay.toml"))
    assert config.decay.reference_beta == config.build_law().esssup() == 0.45
    assert config.decay.dominance_from == 50
    assert config.checks["dominance"].mode == "at_most"
