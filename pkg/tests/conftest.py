import pytest

from polyprime import e8, stephens


@pytest.fixture(scope="session")
def enum():
    return e8.enumerate_all_rank8()


@pytest.fixture(scope="session")
def s8_small():
    return stephens.stephens_constant(8, 10 ** 6)
