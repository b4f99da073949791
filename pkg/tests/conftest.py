import pytest
import numpy as np
from typing import Callable, Sequence

from msgprol.graph.core import make_cycle, make_path
from msgprol.graph.prolongation import random_orthogonal


# --- Slow benchmarks ---

def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run desk-scale benchmarks.")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale benchmark, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


# --- Randomness ---

@pytest.fixture(scope="function")
def rng() -> np.random.Generator:
    """Seeded generator, fresh per test."""
    return np.random.default_rng(20240611)


# --- Small graphs ---

@pytest.fixture
def path3():
    return make_path(3)


@pytest.fixture
def cycle4():
    return make_cycle(4)


@pytest.fixture
def random_stiefel(rng) -> Callable[[int, int], np.ndarray]:
    """Factory for random orthonormal-column matrices."""
    def _make(n2: int, n1: int) -> np.ndarray:
        return random_orthogonal(n2, n1, rng)
    return _make


# --- Finite-difference oracle ---

def finite_difference(f: Callable[[np.ndarray], float], x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of a scalar function of an array."""
    x = np.array(x, dtype=float)
    grad = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        orig = x[idx]
        x[idx] = orig + h
        f_plus = f(x)
        x[idx] = orig - h
        f_minus = f(x)
        x[idx] = orig
        grad[idx] = (f_plus - f_minus) / (2 * h)
    return grad


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    denom = max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)
    return float(np.linalg.norm(a - b) / denom)


@pytest.fixture
def fd() -> Callable:
    return finite_difference


@pytest.fixture
def rel_err() -> Callable:
    return relative_error

