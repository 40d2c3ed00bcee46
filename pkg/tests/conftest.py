import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_points_on_circle(n, rng):
    theta = np.sort(rng.uniform(0, 2 * np.pi, n))
    return np.column_stack([np.cos(theta), np.sin(theta)])
