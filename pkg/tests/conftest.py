import numpy as np
import pytest

from exmcmc import fixtures
from exmcmc.kernel import KernelPair


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def uniform_walk():
    return fixtures.lazy_walk_uniform()


@pytest.fixture
def skewed_walk():
    return fixtures.lazy_walk_skewed()


@pytest.fixture
def drift_cycle():
    return fixtures.drift_cycle_skewed()


@pytest.fixture
def skewed_pair(skewed_walk):
    kernel, target = skewed_walk
    return KernelPair.from_discrete(kernel, target)
