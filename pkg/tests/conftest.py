import numpy as np
import pytest

from j1j2chain.params import ModelParams

# reference spectra at 2N = 4: (roots in the native parametrization, level energy, level index),
# roots quoted to four decimals
REFERENCE_REAL = [
    ((-2.0080, 2.0080), -100.4304, 1),
    ((2.6286,), -20.0748, 2),
    ((-2.0253 - 3.1416j, 2.0253), -20.0748, 2),
    ((0.0,), 5.0260, 3),
    ((-3.1416j, 0.0), 17.9135, 4),
    ((-1.3032j, 1.3032j), 18.1853, 5),
    ((), 22.2360, 6),
    ((-3.1416j,), 35.1235, 7),
    ((-2.0777 - 3.1416j, 2.0777 - 3.1416j), 60.0091, 8),
]

REFERENCE_IMAG = [
    ((-1.9566, 1.9566), -12.1765, 1),
    ((-3.1416, 0.0), -4.3247, 2),
    ((-1.8439,), -1.8476, 3),
    ((-1.5708 - 0.9497j, -1.5708 + 0.9497j), -1.8476, 3),
    ((-3.1416,), 0.1830, 4),
    ((-3.1416 - 1.1002j, -3.1416 + 1.1002j), 1.1932, 5),
    ((-1.3426j, 1.3426j), 2.9633, 6),
    ((0.0,), 3.5122, 7),
    ((), 8.0199, 8),
]


@pytest.fixture
def real_reference_params():
    return ModelParams.real_eta(4, 1.0, 1.0)


@pytest.fixture
def imag_reference_params():
    return ModelParams.imag_eta(4, 1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def reference_levels(rows):
    return sorted({round(E, 4) for _, E, _ in rows})
