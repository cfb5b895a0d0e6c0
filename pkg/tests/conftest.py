import logging
from typing import Callable, Dict

import pytest
from faker import Faker

from app.models.group import Group
from app.operations import constructors as c
from app.operations.verification import corpus

# ======================================================================================
# Logging Configuration
# ======================================================================================
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# ======================================================================================
# Random Data
# ======================================================================================
fake = Faker()
Faker.seed(12345)


def random_vector(length: int, modulus: int) -> list[int]:
    """A vector over Z/modulus drawn from the seeded Faker instance."""
    return [fake.random_int(min=0, max=modulus - 1) for _ in range(length)]


def random_matrix(rows: int, cols: int, low: int = -6, high: int = 6) -> list[list[int]]:
    """An integer matrix with entries in [low, high]."""
    return [[fake.random_int(min=low, max=high) for _ in range(cols)] for _ in range(rows)]


# ======================================================================================
# Group Fixtures
# ======================================================================================
@pytest.fixture(scope="session")
def small_corpus() -> Dict[str, Group]:
    """Every corpus group, built once per session."""
    groups = corpus()
    logger.info(f"Built corpus of {len(groups)} groups.")
    return groups


@pytest.fixture(scope="session")
def group_of(small_corpus) -> Callable[[str], Group]:
    """Look up a corpus group by name."""
    return small_corpus.__getitem__


@pytest.fixture(scope="session")
def sl2_f5() -> Group:
    return c.sl2(5).group


@pytest.fixture
def fake_vector() -> Callable[[int, int], list[int]]:
    return random_vector


@pytest.fixture
def fake_matrix() -> Callable[..., list[list[int]]]:
    return random_matrix


# ======================================================================================
# Pytest Command-Line Options
# ======================================================================================
def pytest_addoption(parser):
    """
    Add custom command line options:
      --run-slow    : Run tests marked as 'slow'
    """
    parser.addoption("--run-slow", action="store_true", help="Run tests marked as slow")


def pytest_collection_modifyitems(config, items):
    """
    Skip tests marked as 'slow' unless --run-slow is specified.
    """
    if not config.getoption("--run-slow"):
        skip_slow = pytest.mark.skip(reason="use --run-slow to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
