import pytest

from nfr4.fixtures import ATM_PATH, LIBRARY_PATH, load_atm, load_library


@pytest.fixture(scope="session")
def library_model():
    return load_library()


@pytest.fixture(scope="session")
def atm_model():
    return load_atm()


@pytest.fixture(scope="session")
def library_text():
    return LIBRARY_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def atm_text():
    return ATM_PATH.read_text(encoding="utf-8")
