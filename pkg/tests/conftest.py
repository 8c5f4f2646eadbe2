from pathlib import Path

import pytest

import result_cache
from constants import RUN_SLOW
from instance_model import Instance, load_instance

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_collection_modifyitems(config, items):
    if RUN_SLOW:
        return
    skip_slow = pytest.mark.skip(reason="set POPROOM_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Keep experiment results of the test run out of the working tree."""
    monkeypatch.setattr(result_cache, "CACHE_DIR", tmp_path / "cache")
    monkeypatch.setattr(result_cache, "DISABLE_CACHE", False)


@pytest.fixture
def k4() -> Instance:
    return load_instance(FIXTURES / "k4.txt")


@pytest.fixture
def unpopular7() -> Instance:
    return load_instance(FIXTURES / "unpopular7.txt")


@pytest.fixture
def popular7() -> Instance:
    return load_instance(FIXTURES / "popular7.txt")


@pytest.fixture
def triangle() -> Instance:
    return load_instance(FIXTURES / "triangle.txt")
