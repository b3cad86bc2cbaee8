import pytest

from etalab.zeros import load_fixture


@pytest.fixture(scope="session")
def catalog():
    return load_fixture()
