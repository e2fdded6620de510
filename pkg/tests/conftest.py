import pytest

from ionbench import World, load_bundled_database


@pytest.fixture(scope="session")
def db():
    return load_bundled_database()


@pytest.fixture()
def world(db):
    return World(db)
