from functools import lru_cache

import pytest

from app.services.group_core import build_group
from app.services.group_spec import parse_group_spec


@lru_cache(maxsize=None)
def make_group(text: str):
    return build_group(parse_group_spec(text))


@pytest.fixture(scope="session")
def group():
    """Built groups, cached per spec text for the whole session."""
    return make_group


@pytest.fixture(scope="session")
def sym3():
    return make_group("symmetric 3")


@pytest.fixture(scope="session")
def sym4():
    return make_group("symmetric 4")


@pytest.fixture(scope="session")
def alt4():
    return make_group("alternating 4")


@pytest.fixture(scope="session")
def klein4():
    return make_group("elemabelian 2 2")


@pytest.fixture(scope="session")
def quaternion8():
    return make_group("quaternion 8")
