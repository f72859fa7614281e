import pytest
from hypothesis import HealthCheck, settings

from fedosphere.fedosov import Fedosov
from fedosphere.observables import Observables
from fedosphere.suites import Context

settings.register_profile(
    "exact",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def fed():
    return Fedosov()


@pytest.fixture(scope="session")
def frame(fed):
    return fed.frame


@pytest.fixture(scope="session")
def alg(frame):
    return frame.alg


@pytest.fixture(scope="session")
def tower(frame):
    return frame.tower


@pytest.fixture(scope="session")
def obs(fed):
    return Observables(fed)


@pytest.fixture(scope="session")
def ctx(fed):
    """A suite context sharing the session's engine objects."""
    c = Context(seed=0, points=20)
    c._cache["fed"] = fed
    return c
