import numpy as np
import pytest

from curvlab import SearchConfig


@pytest.fixture
def fast_cfg():
    """Fewer restarts: plenty for model spaces and small random tensors."""
    return SearchConfig(restarts=16, seed=3)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
