import pytest
from hypothesis import HealthCheck, settings

from actlearn.logic import Vocabulary

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def P():
    return Vocabulary(["p"])


@pytest.fixture
def PQ():
    return Vocabulary(["p", "q"])


@pytest.fixture
def PQR():
    return Vocabulary(["p", "q", "r"])
