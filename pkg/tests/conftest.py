import pytest

from qsketch import kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Compile (numba backend) before any timed or counted work runs.
    kernels.warmup()
