import sys
from os.path import abspath, dirname, join

import numpy as np
import pytest

# Add the root project folder to the python path, so that the tests can import the package
this_dir = dirname(__file__)
sys.path.insert(0, abspath(join(this_dir, "..")))

from tests.factories import make_t1, make_t2, random_instance  # noqa: E402

DATA_DIR = join(this_dir, "data")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance checks")


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def t1():
    return make_t1()


@pytest.fixture
def t2():
    return make_t2()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_instances():
    """Factory: `random_instances(count, **kwargs)` gives `count` seeded random instances."""
    def build(count, **kwargs):
        return [random_instance(seed, **kwargs) for seed in range(count)]
    return build
