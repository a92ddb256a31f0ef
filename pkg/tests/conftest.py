import pytest
from hypothesis import HealthCheck, settings

from rslou.model import validate_model

from .helpers import Q2

# Property tests draw their cases from a fixed seed so every run is identical.
settings.register_profile(
    "fixed",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fixed")

@pytest.fixture
def switch_model():
    return validate_model(Q2, [-2.0, 1.0], [1.0, 1.0])


@pytest.fixture
def transient_model():
    return validate_model(Q2, [2.0, -1.0], [1.0, 1.0])
