import numpy as np
import pytest

from hopftwist import ScalarContext

SEED = 7


@pytest.fixture(scope="session")
def ctx():
    return ScalarContext(tolerance=1e-9, seed=SEED)


@pytest.fixture()
def rng():
    return np.random.default_rng(SEED)
