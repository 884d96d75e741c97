import numpy as np
import pytest

from rootplanes import _kernels


@pytest.fixture(scope="session", autouse=True)
def kernel_warmup():
    # compile (or load from cache) every jit kernel before any timed test runs
    _kernels.warmup()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
