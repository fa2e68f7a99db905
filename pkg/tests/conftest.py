import numpy as np
import pytest

from opalg import examples as ex
from opalg.linalg import ToleranceConfig


@pytest.fixture
def tol():
    return ToleranceConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def car_pair():
    return ex.car_pair()


def unit(n, i, j, m=None):
    return ex.matrix_unit(n, i, j, m)


@pytest.fixture
def pq():
    return np.diag([0.0, 1.0, 1.0, 0.0]).astype(complex)
