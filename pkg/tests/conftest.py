"""
Pytest configuration and shared fixtures for lsvrand tests.
"""

import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from src.lsvrand.core.env import EnvironmentPath, IidDiscreteLaw, sample_path
from src.lsvrand.core.transfer import DensityCocycle, Grid, UlamFamily


@pytest.fixture(scope="session")
def project_root():
    """Path to project root directory."""
    return Path(__file__).parent.parent


@pytest.fixture(scope="session")
def configs_dir(project_root):
    """Path to the bundled experiment configs."""
    path = project_root / "configs"
    assert path.exists(), f"configs directory not found: {path}"
    return path


@pytest.fixture
def temp_output_dir():
    """Temporary directory for test outputs.

    Automatically cleaned up after test completes.
    """
    temp_dir = tempfile.mkdtemp(prefix="lsvrand_test_")
    yield Path(temp_dir)
    shutil.rmtree(temp_dir, ignore_errors=True)


@pytest.fixture(scope="session")
def doubling_path():
    """Constant β = 0 path, 200 entries on each side of the origin."""
    return EnvironmentPath.from_sequence(np.zeros(401), n_past=200)


@pytest.fixture(scope="session")
def half_path():
    """Constant β = 0.5 path, long enough for depth-500 return structures."""
    return EnvironmentPath.from_sequence(np.full(1201, 0.5), n_past=600)


@pytest.fixture(scope="session")
def coin_law():
    """Fair coin on {0.1, 0.45}."""
    return IidDiscreteLaw(values=[0.1, 0.45], probs=[0.5, 0.5])


@pytest.fixture(scope="session")
def coin_path(coin_law):
    """One sampled coin path with 400 past and 600 future entries."""
    return sample_path(coin_law, 400, 600, seed=7)


@pytest.fixture(scope="session")
def uniform_grid():
    """256 equal cells."""
    return Grid.uniform(256)


@pytest.fixture(scope="session")
def geometric_grid():
    """512 cells refined towards 0."""
    return Grid.geometric(512, 2.0)


@pytest.fixture(scope="session")
def doubling_cocycle(doubling_path, uniform_grid):
    """Ulam cocycle of the doubling map; its densities are exactly uniform."""
    return DensityCocycle(doubling_path, uniform_grid, n_pull=50, family=UlamFamily(uniform_grid))


@pytest.fixture(scope="session")
def coin_cocycle(coin_path, geometric_grid):
    """Ulam cocycle along the coin path."""
    return DensityCocycle(coin_path, geometric_grid, n_pull=400, family=UlamFamily(geometric_grid))


@pytest.fixture
def base_config():
    """Smallest valid experiment mapping; tests copy and extend it."""
    return {
        "schema_version": 1,
        "gamma": 0.5,
        "n_pull": 50,
        "law": {"kind": "constant", "beta": 0.0, "n_future": 300},
        "grid": {"n": 64},
        "mc": {"n_samples": 2000, "seed": 11, "block_size": 512},
    }


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers", "integration: mark test as integration test (runs commands end to end)"
    )
    config.addinivalue_line("markers", "slow: mark test as slow running")
    config.addinivalue_line("markers", "unit: mark test as unit test (fast, isolated)")
