import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from src.data.synthetic import var1_groups
from tests.helpers import write_long_csv

settings.register_profile("default", max_examples=50, deadline=None)
settings.register_profile(
    "ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def two_groups():
    """Two labeled groups of VAR(1) items with different dominant directions."""
    return var1_groups(n_groups=2, per_group=10, m=64, n=3, seed=3)


@pytest.fixture
def two_groups_csv(tmp_path, two_groups):
    return str(write_long_csv(two_groups, tmp_path / "groups.csv"))


@pytest.fixture
def two_blobs():
    """Two well-separated 10-point Gaussian blobs in 5-D plus their labels."""
    rng = np.random.default_rng(11)
    points = np.vstack([rng.normal(0.0, 1.0, (10, 5)), rng.normal(12.0, 1.0, (10, 5))])
    return points, np.repeat([0, 1], 10)
