import pytest

from actconv import KernelParams, MeasurementGrid

# the (q, beta) grid exercised by the acceptance checks
PARAM_GRID = [KernelParams(q, b) for q in (0.5, 1.0, 2.0) for b in (0.5, 1.0, 2.0)]


@pytest.fixture(scope="session")
def p11():
    return KernelParams(1.0, 1.0)


@pytest.fixture(scope="session")
def grid():
    return MeasurementGrid.uniform()
