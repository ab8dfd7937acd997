import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=50,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


@pytest.fixture
def triangular():
    from schrograph.zoo import TriangularGraph

    return TriangularGraph()


@pytest.fixture
def triangular_v():
    from schrograph.zoo import triangular_potential

    return triangular_potential()
