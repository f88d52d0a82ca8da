import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from toricmld.fan import make_fan
from toricmld.logpair import make_pair

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def a1():
    return make_pair(make_fan(2, [[(1, 0), (1, 2)]]), [0, 0])


@pytest.fixture
def quotient():
    return make_pair(make_fan(3, [[(1, 0, 0), (0, 1, 0), (-1, -1, 2)]]), [0, 0, 0])
