import random

import pytest

from heckeft.fq import FqContext


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture(scope="session")
def F2():
    return FqContext(2)


@pytest.fixture(scope="session")
def F3():
    return FqContext(3)


@pytest.fixture(scope="session")
def F4():
    return FqContext(2, 2)


@pytest.fixture(scope="session")
def F9():
    return FqContext(3, 2)
