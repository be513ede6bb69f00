import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from propeq import SampleClock

settings.register_profile(
    "numeric",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


@pytest.fixture(scope="session")
def clock():
    """Default capture clock: 32 kHz, 1 s, 1 Hz bins."""
    return SampleClock()


@pytest.fixture(scope="session")
def small_clock():
    """Fast clock with the same 1 Hz bin spacing and room for the tone band."""
    return SampleClock(rate_hz=6400.0, n_samples=6400)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
