import numpy as np
import pytest

from polarkit.coding.kernel import permutation_kernel, standard_kernel
from polarkit.coding.signal_set import psk

PI1_Q5 = (0, 2, 4, 1, 3)
PI2_Q5 = (0, 3, 1, 4, 2)
PI_Q4 = (0, 2, 1, 3)
PI_Q8 = (0, 3, 6, 1, 4, 7, 2, 5)


@pytest.fixture
def psk5():
    return psk(5)


@pytest.fixture
def standard5():
    return standard_kernel(5)


@pytest.fixture
def pi1_kernel():
    return permutation_kernel(5, PI1_Q5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
