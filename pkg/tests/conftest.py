import pytest
from hypothesis import HealthCheck, settings

from morleyduality.exactalg import Field

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture(params=[0, 101], ids=["QQ", "GF101"])
def field(request):
    return Field(request.param)


@pytest.fixture
def qq():
    return Field(0)


@pytest.fixture
def f101():
    return Field(101)
