import numpy as np
import pytest

from sisbox import FrequencyGrid, TimeSamples, build_signal, build_space


@pytest.fixture(scope="session")
def grid():
    return FrequencyGrid(32, 1024)


@pytest.fixture(scope="session")
def wide_grid():
    # wide enough for the ex2 spectrum (blocks out to omega = 60)
    return FrequencyGrid(64, 1024)


@pytest.fixture(scope="session")
def shannon(grid):
    return build_signal("shannon", grid)


@pytest.fixture(scope="session")
def blhat(grid):
    return build_signal("blhat", grid)


@pytest.fixture(scope="session")
def ex2():
    return build_signal("ex2", FrequencyGrid(64, 1024))


@pytest.fixture(scope="session")
def ex3():
    return build_signal("ex3", FrequencyGrid(32, 1024))


@pytest.fixture(scope="session")
def hat():
    return build_signal("hat", FrequencyGrid(32, 1024))


@pytest.fixture(scope="session")
def shannon_space(shannon, grid):
    return build_space(shannon, grid)


@pytest.fixture(scope="session")
def ex3_space(ex3, grid):
    return build_space(ex3, grid)


@pytest.fixture(scope="session")
def hat_space(hat, grid):
    return build_space(hat, grid)


@pytest.fixture(scope="session")
def ex2_space(ex2, wide_grid):
    return build_space(ex2, wide_grid)


def random_coefficients(seed: int, span: int = 8) -> TimeSamples:
    rng = np.random.default_rng(seed)
    ks = np.arange(-span, span + 1)
    vals = rng.standard_normal(ks.size) + 1j * rng.standard_normal(ks.size)
    return TimeSamples(ks, vals, span)
