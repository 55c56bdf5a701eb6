import numpy as np
import pytest

from cdkernel.measure import zero_weight


@pytest.fixture
def phi0():
    return zero_weight()


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
