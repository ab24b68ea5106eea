import numpy as np
import pytest


@pytest.fixture
def rng():
    """Seeded generator shared by randomized tests."""
    return np.random.default_rng(20240115)
