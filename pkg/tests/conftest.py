import time

import pytest
from hypothesis import HealthCheck, settings

from halfrib.modules import irrep
from halfrib.rootdata import build_root_datum

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def a1():
    return build_root_datum("A", 1)


@pytest.fixture(scope="session")
def a2():
    return build_root_datum("A", 2)


@pytest.fixture(scope="session")
def a3():
    return build_root_datum("A", 3)


@pytest.fixture(scope="session")
def V(a1):
    """sl2 standard module, basis (v+, v-)."""
    return irrep(a1, (1,))


@pytest.fixture(scope="session")
def V2(a1):
    return irrep(a1, (2,))


_SESSION_START = time.time()


def pytest_collection_modifyitems(config, items):
    """Whole-suite checks go last so they see the full elapsed time."""
    items.sort(key=lambda item: item.get_closest_marker("whole_suite") is not None)


@pytest.fixture(scope="session")
def session_start():
    return _SESSION_START
