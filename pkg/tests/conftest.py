import pytest

from fbar import transtable


@pytest.fixture(scope="session")
def tt():
    return transtable.generate_tt()


@pytest.fixture(scope="session")
def tt_grouped():
    return transtable.generate_tt("grouped")


@pytest.fixture(scope="session")
def set4():
    return transtable.TtSet4.canonical()
