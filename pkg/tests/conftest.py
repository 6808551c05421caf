import random

import pytest

from lcmume import setup


@pytest.fixture(scope="session")
def toy_setup():
    return setup(random.Random(101), group="toy-subgroup")


@pytest.fixture(scope="session")
def prod_setup():
    return setup(random.Random(256), group="production-curve")
