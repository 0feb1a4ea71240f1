import numpy as np
import pytest

from thetaframe import default_grid, default_waveform

SQRT_PI = np.sqrt(np.pi)


@pytest.fixture(scope="session")
def w():
    return default_waveform()


@pytest.fixture(scope="session")
def grid():
    return default_grid()
