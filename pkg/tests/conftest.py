import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from flipcube.generators import named_fixtures  # noqa: E402
from flipcube.geom import PointSet  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def point_sets(min_size=3, max_size=8, box=6, allow_collinear=True):
    """Strategy for small duplicate-free integer point sets."""
    pts = st.lists(st.tuples(st.integers(0, box), st.integers(0, box)),
                   min_size=min_size, max_size=max_size, unique=True)
    s = pts.map(PointSet)
    if not allow_collinear:
        s = s.filter(lambda P: not P.all_collinear())
    return s


@pytest.fixture(scope="session")
def fixtures():
    return named_fixtures()


@pytest.fixture(scope="session")
def grid(fixtures):
    return fixtures["grid3x3"]


@pytest.fixture(scope="session")
def hexagon(fixtures):
    return fixtures["hexagon"]


@pytest.fixture(scope="session")
def square(fixtures):
    return fixtures["square"]
