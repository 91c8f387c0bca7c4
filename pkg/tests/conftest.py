import numpy as np
import pytest

from app.fields import from_function, make_grid


@pytest.fixture
def small_grid():
    """[-6, 6)^3 with 48 points per axis; enough for smooth unit-scale data."""
    return make_grid(6.0, 48)


@pytest.fixture
def bump_grid():
    """[-4, 4)^3 with 80 points per axis; resolves certified bumps of radius 2."""
    return make_grid(4.0, 80)


@pytest.fixture
def wide_grid():
    """[-16, 16)^3 with 64 points per axis; room for half waves to travel."""
    return make_grid(16.0, 64)


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(12345)


@pytest.fixture
def gaussian(small_grid):
    """exp(-|x|^2 / 2) on the small grid."""
    return from_function(small_grid, lambda x, y, z: np.exp(-(x ** 2 + y ** 2 + z ** 2) / 2.0))
